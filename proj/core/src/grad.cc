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

#include "iirfit/grad.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <limits>

#include "iirfit/errors.h"
#include "section_math.h"

namespace iirfit {

namespace {

constexpr double kGainDbPerNeper = 20.0 / std::numbers::ln10;

// Outside this range 100 * sigmoid rounds to exactly 0 or 100 in double.
constexpr double kRawGainMin = -700.0;
constexpr double kRawGainMax = 35.0;

double clamp_raw(double raw) { return std::clamp(raw, kRawGainMin, kRawGainMax); }

double log_sigmoid(double x) {
  // log(1 / (1 + e^-x)) without overflow.
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

CascadeParams::CascadeParams(std::vector<double> values)
    : values_(std::move(values)) {
  if (values_.empty() || (values_.size() - 1) % 4 != 0) {
    throw InvalidArgument("cascade parameter vector must have 4K + 1 entries");
  }
}

void CascadeParams::set_pole(int k, Complex p) {
  values_[pole_index(k)] = p.real();
  values_[pole_index(k) + 1] = p.imag();
}

void CascadeParams::set_zero(int k, Complex z) {
  values_[zero_index(k)] = z.real();
  values_[zero_index(k) + 1] = z.imag();
}

double gain_from_raw(double raw_gain, GainMode mode) {
  return mode == GainMode::kDirect ? std::abs(raw_gain)
                                   : 100.0 * sigmoid(clamp_raw(raw_gain));
}

double gain_db_from_raw(double raw_gain, GainMode mode) {
  if (mode == GainMode::kSigmoid100) {
    return 40.0 + kGainDbPerNeper * log_sigmoid(clamp_raw(raw_gain));
  }
  if (raw_gain == 0.0 || !std::isfinite(raw_gain)) {
    throw DegenerateResponse("direct gain must be nonzero and finite");
  }
  return 20.0 * std::log10(std::abs(raw_gain));
}

double raw_from_gain(double gain, GainMode mode) {
  if (mode == GainMode::kDirect) return gain;
  const double p = std::clamp(gain / 100.0, 1e-300, 1.0 - 1e-12);
  return std::log(p) - std::log1p(-p);
}

FilterCascade params_to_cascade(const CascadeParams& params, GainMode mode) {
  FilterCascade c;
  c.gain = gain_from_raw(params.raw_gain(), mode);
  for (int k = 0; k < params.num_sections(); ++k) {
    c.poles.push_back(min_phase_project(params.pole(k)));
    c.zeros.push_back(min_phase_project(params.zero(k)));
  }
  return c;
}

std::array<double, 4> min_phase_jacobian(Complex root) {
  const double x = root.real();
  const double y = root.imag();
  const double m = std::abs(root);
  if (m == 0.0) return {0.0, 0.0, 0.0, 0.0};
  constexpr double eps = kMinPhaseEpsilon;
  const double th = std::tanh(m);
  const double sech2 = 1.0 - th * th;
  const double denom = m + eps;
  const double s = (1.0 - eps) * th / denom;
  const double ds_dm = (1.0 - eps) * (sech2 * denom - th) / (denom * denom);
  const double k = ds_dm / m;
  return {s + k * x * x, k * x * y, k * x * y, s + k * y * y};
}

LossEvaluator::LossEvaluator(const FrequencyGrid& grid) : grid_(grid) {
  const int f = grid.size();
  cos1_.resize(f);
  sin1_.resize(f);
  cos2_.resize(f);
  sin2_.resize(f);
  for (int j = 0; j < f; ++j) {
    const internal::Trig t(grid.omega(j));
    cos1_[j] = t.c1;
    sin1_[j] = t.s1;
    cos2_[j] = t.c2;
    sin2_[j] = t.s2;
  }
}

void LossEvaluator::check_target(const MagnitudeResponse& target) const {
  if (!(target.grid == grid_) ||
      static_cast<int>(target.values_db.size()) != grid_.size()) {
    throw GridMismatch("loss: target grid does not match the evaluator grid");
  }
}

std::vector<double> LossEvaluator::roots_db(const CascadeParams& params) const {
  const int f = grid_.size();
  const int num_k = params.num_sections();
  std::vector<Complex> poles(num_k), zeros(num_k);
  for (int k = 0; k < num_k; ++k) {
    poles[k] = min_phase_project(params.pole(k));
    zeros[k] = min_phase_project(params.zero(k));
  }
  std::vector<double> out(f, 0.0);
  for (int j = 0; j < f; ++j) {
    const internal::Trig t(cos1_[j], sin1_[j], cos2_[j], sin2_[j]);
    double db = 0.0;
    for (int k = 0; k < num_k; ++k) {
      const double e_num = internal::pair_energy(zeros[k], t);
      const double e_den = internal::pair_energy(poles[k], t);
      if (e_num == 0.0 || e_den == 0.0) {
        throw DegenerateResponse("projected root on the unit circle at omega = " +
                                 std::to_string(grid_.omega(j)));
      }
      db += internal::kPowerToDb * std::log10(e_num / e_den);
    }
    out[j] = db;
  }
  return out;
}

double LossEvaluator::loss(const CascadeParams& params,
                           const MagnitudeResponse& target,
                           GainMode mode) const {
  check_target(target);
  const double gain_db = gain_db_from_raw(params.raw_gain(), mode);
  const auto db = roots_db(params);
  double sum = 0.0;
  for (int j = 0; j < grid_.size(); ++j) {
    const double e = gain_db + db[j] - target.values_db[j];
    sum += e * e;
  }
  const double l = sum / grid_.size();
  if (!std::isfinite(l)) throw DegenerateResponse("loss is not finite");
  return l;
}

LossAndGrad LossEvaluator::loss_and_grad(const CascadeParams& params,
                                         const MagnitudeResponse& target,
                                         GainMode mode) const {
  check_target(target);
  const int f = grid_.size();
  const int num_k = params.num_sections();
  const double gain_db = gain_db_from_raw(params.raw_gain(), mode);
  const auto db = roots_db(params);

  std::vector<double> residual(f);
  double sum = 0.0;
  for (int j = 0; j < f; ++j) {
    residual[j] = gain_db + db[j] - target.values_db[j];
    sum += residual[j] * residual[j];
  }
  LossAndGrad out;
  out.loss = sum / f;
  if (!std::isfinite(out.loss)) throw DegenerateResponse("loss is not finite");
  out.grad.assign(params.size(), 0.0);

  // dL/d(est_j) = 2 e_j / F; the gain term is the same at every frequency.
  const double scale = 2.0 / f;
  double residual_sum = 0.0;
  for (double e : residual) residual_sum += e;
  const double raw = params.raw_gain();
  double dgain_db = kGainDbPerNeper / raw;
  if (mode == GainMode::kSigmoid100) {
    dgain_db = (raw < kRawGainMin || raw > kRawGainMax)
                   ? 0.0
                   : kGainDbPerNeper * (1.0 - sigmoid(raw));
  }
  out.grad[0] = scale * residual_sum * dgain_db;

  // Accumulate dL/d(Re q), dL/d(Im q) for each projected root, then chain
  // through the projection Jacobian.
  for (int k = 0; k < num_k; ++k) {
    for (const bool is_zero : {false, true}) {
      const Complex raw = is_zero ? params.zero(k) : params.pole(k);
      const Complex q = min_phase_project(raw);
      const double sign = is_zero ? 1.0 : -1.0;
      const double c1 = -2.0 * q.real();
      const double c2 = std::norm(q);
      double d_c1 = 0.0;
      double d_c2 = 0.0;
      for (int j = 0; j < f; ++j) {
        const internal::Trig t(cos1_[j], sin1_[j], cos2_[j], sin2_[j]);
        const internal::PairTerms p = internal::pair_terms(c1, c2, t);
        const double w = residual[j] / p.energy();
        d_c1 += w * p.d_c1(t);
        d_c2 += w * p.d_c2(t);
      }
      d_c1 *= sign * scale * internal::kDbPerNeper;
      d_c2 *= sign * scale * internal::kDbPerNeper;
      const double d_re = -2.0 * d_c1 + 2.0 * q.real() * d_c2;
      const double d_im = 2.0 * q.imag() * d_c2;
      const auto jac = min_phase_jacobian(raw);
      const int idx = is_zero ? params.zero_index(k) : params.pole_index(k);
      out.grad[idx] = d_re * jac[0] + d_im * jac[2];
      out.grad[idx + 1] = d_re * jac[1] + d_im * jac[3];
    }
  }
  return out;
}

double LossEvaluator::flat_match_raw_gain(const CascadeParams& params,
                                          const MagnitudeResponse& target,
                                          GainMode mode) const {
  check_target(target);
  const auto db = roots_db(params);
  double offset = 0.0;
  for (int j = 0; j < grid_.size(); ++j) offset += target.values_db[j] - db[j];
  offset /= grid_.size();
  return raw_from_gain(std::pow(10.0, offset / 20.0), mode);
}

LossAndGrad loss_and_grad(const CascadeParams& params,
                          const MagnitudeResponse& target, GainMode mode) {
  return LossEvaluator(target.grid).loss_and_grad(params, target, mode);
}

GradVector finite_diff_grad(const CascadeParams& params,
                            const MagnitudeResponse& target, GainMode mode,
                            double h) {
  if (!(h > 0.0)) throw InvalidArgument("finite difference step must be positive");
  const LossEvaluator eval(target.grid);
  GradVector grad(params.size());
  CascadeParams probe = params;
  for (int i = 0; i < params.size(); ++i) {
    const double x = params.values()[i];
    probe.values()[i] = x + h;
    const double up = eval.loss(probe, target, mode);
    probe.values()[i] = x - h;
    const double down = eval.loss(probe, target, mode);
    probe.values()[i] = x;
    grad[i] = (up - down) / (2.0 * h);
  }
  return grad;
}

}  // namespace iirfit
