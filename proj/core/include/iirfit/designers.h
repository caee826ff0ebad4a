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

// Non-neural design engines: modified Yule-Walker (MYW) and gradient
// descent on the cascade parameters (SGD).

#ifndef IIRFIT_DESIGNERS_H_
#define IIRFIT_DESIGNERS_H_

#include <cstdint>
#include <vector>

#include "iirfit/dsp.h"
#include "iirfit/grad.h"
#include "iirfit/mlp.h"

namespace iirfit {

struct MywConfig {
  int order = 16;
  int acf_lags = 0;  // M; 0 selects 4N
  int fft_size = 0;  // 0 selects next_pow2(4F)
};

// Denominator from least squares over autocorrelation lags N+1..M of the
// target power spectrum, reflected to be stable; numerator from a
// real-cepstrum minimum-phase factor of |H| |A| truncated to N+1 taps; gain
// refit so the mean dB error is zero. Falls back to a gain-only filter when
// the least-squares system is singular. Throws InvalidArgument on a
// non-finite target or bad config.
CoefficientFilter myw_design(const MagnitudeResponse& target, const MywConfig& config);

enum class SgdOptimizer { kPlain, kAdaptiveMoment };

struct SgdConfig {
  int order = 16;
  int steps = 100;
  double lr = 5e-4;
  std::uint64_t seed = 0;
  GainMode gain_mode = GainMode::kDirect;
  SgdOptimizer optimizer = SgdOptimizer::kPlain;
  AdamWConfig adam{0.9, 0.999, 1e-8, 0.0};
  int max_reinit = 16;
};

struct SgdResult {
  FilterCascade cascade;             // from the best-seen parameters
  CascadeParams params;              // best-seen raw parameters
  std::vector<double> loss_trace;    // loss of iterate 0..steps
  std::vector<double> best_trace;    // running minimum of loss_trace
  double best_loss = 0.0;
  int reinitializations = 0;
};

// Roots' raw parts uniform in [-0.5, 0.5], raw gain at the flat-match
// value, then `steps` descent updates. Throws InvalidArgument on steps < 1,
// lr <= 0 or an odd order, NumericError after max_reinit failed recoveries.
SgdResult sgd_design(const MagnitudeResponse& target, const SgdConfig& config);

}  // namespace iirfit

#endif  // IIRFIT_DESIGNERS_H_
