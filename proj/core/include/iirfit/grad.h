/*
 * Copyright 2026 The iirfit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Analytic gradients of the dB-MSE loss with respect to cascade parameters,
// taken through the minimum-phase projection and the gain mapping.
//
// Parameter layout (K sections, 4K + 1 values):
//   [raw_gain, Re p0, Im p0, ..., Re p_{K-1}, Im p_{K-1},
//              Re z0, Im z0, ..., Re z_{K-1}, Im z_{K-1}]
// Pole and zero parts are raw (pre-projection) values.

#ifndef IIRFIT_GRAD_H_
#define IIRFIT_GRAD_H_

#include <array>
#include <span>
#include <vector>

#include "iirfit/dsp.h"

namespace iirfit {

enum class GainMode {
  kDirect,      // G = raw_gain (magnitude is used, so the sign is irrelevant)
  kSigmoid100,  // G = 100 * sigmoid(raw_gain), raw clamped to [-700, 35] so
                // that G stays strictly inside (0, 100)
};

class CascadeParams {
 public:
  CascadeParams() = default;
  explicit CascadeParams(int num_sections)
      : values_(4 * num_sections + 1, 0.0) {}
  explicit CascadeParams(std::vector<double> values);

  int num_sections() const { return static_cast<int>((values_.size() - 1) / 4); }
  int size() const { return static_cast<int>(values_.size()); }

  double& raw_gain() { return values_[0]; }
  double raw_gain() const { return values_[0]; }
  Complex pole(int k) const { return {values_[pole_index(k)], values_[pole_index(k) + 1]}; }
  Complex zero(int k) const { return {values_[zero_index(k)], values_[zero_index(k) + 1]}; }
  void set_pole(int k, Complex p);
  void set_zero(int k, Complex z);

  int pole_index(int k) const { return 1 + 2 * k; }
  int zero_index(int k) const { return 1 + 2 * num_sections() + 2 * k; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

 private:
  std::vector<double> values_ = {0.0};
};

using GradVector = std::vector<double>;

struct LossAndGrad {
  double loss = 0.0;
  GradVector grad;
};

double gain_from_raw(double raw_gain, GainMode mode);
// 20 log10 G for the given raw value. Throws DegenerateResponse if G = 0.
double gain_db_from_raw(double raw_gain, GainMode mode);
// Inverse of gain_from_raw; sigmoid mode clamps to the representable range.
double raw_from_gain(double gain, GainMode mode);

// Projects every root and maps the gain: the cascade the loss is taken on.
FilterCascade params_to_cascade(const CascadeParams& params, GainMode mode);

// Holds per-grid trigonometric tables; evaluation is const and reentrant.
class LossEvaluator {
 public:
  explicit LossEvaluator(const FrequencyGrid& grid);

  const FrequencyGrid& grid() const { return grid_; }

  // Response of the projected cascade (dB), without the gain term.
  std::vector<double> roots_db(const CascadeParams& params) const;

  double loss(const CascadeParams& params, const MagnitudeResponse& target,
              GainMode mode) const;
  LossAndGrad loss_and_grad(const CascadeParams& params,
                            const MagnitudeResponse& target,
                            GainMode mode) const;

  // Raw gain that minimizes the loss for the current roots (the mean dB
  // offset between target and root response).
  double flat_match_raw_gain(const CascadeParams& params,
                             const MagnitudeResponse& target,
                             GainMode mode) const;

 private:
  void check_target(const MagnitudeResponse& target) const;

  FrequencyGrid grid_;
  std::vector<double> cos1_, sin1_, cos2_, sin2_;
};

LossAndGrad loss_and_grad(const CascadeParams& params,
                          const MagnitudeResponse& target, GainMode mode);

// Central differences of LossEvaluator::loss, one coordinate at a time.
GradVector finite_diff_grad(const CascadeParams& params,
                            const MagnitudeResponse& target, GainMode mode,
                            double h);

// Jacobian of min_phase_project at `root`, as
// [d Re q / d x, d Re q / d y, d Im q / d x, d Im q / d y].
std::array<double, 4> min_phase_jacobian(Complex root);

}  // namespace iirfit

#endif  // IIRFIT_GRAD_H_
