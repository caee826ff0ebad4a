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

#include "iirfit/designers.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "iirfit/errors.h"
#include "iirfit/fft.h"
#include "iirfit/polyroots.h"
#include "iirfit/randfilt.h"

namespace iirfit {

namespace {

// Poles closer to the unit circle than this are pulled in after reflection.
constexpr double kMaxPoleRadius = 1.0 - 1e-6;
// Magnitude floor for the cepstrum (-300 dB).
constexpr double kLogMagnitudeFloor = -300.0 / 20.0 * std::numbers::ln10;

void check_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw InvalidArgument("filter order must be even and >= 2, got " + std::to_string(order));
  }
}

void check_finite_target(const MagnitudeResponse& target) {
  if (static_cast<int>(target.values_db.size()) != target.grid.size()) {
    throw InvalidArgument("target values do not match its grid");
  }
  for (double v : target.values_db) {
    if (!std::isfinite(v)) throw InvalidArgument("target response must be finite");
  }
}

// Target dB linearly interpolated at omega in [0, pi].
double interpolate_db(const MagnitudeResponse& target, double omega) {
  const int f = target.grid.size();
  const double pos = omega / std::numbers::pi * (f - 1);
  const int j = std::clamp(static_cast<int>(pos), 0, f - 2);
  const double t = pos - j;
  return (1.0 - t) * target.values_db[j] + t * target.values_db[j + 1];
}

double mean_offset_db(const MagnitudeResponse& target, const MagnitudeResponse& estimate) {
  double sum = 0.0;
  for (size_t j = 0; j < target.values_db.size(); ++j) {
    sum += target.values_db[j] - estimate.values_db[j];
  }
  return sum / static_cast<double>(target.values_db.size());
}

CoefficientFilter gain_only(const MagnitudeResponse& target, int order) {
  double mean = 0.0;
  for (double v : target.values_db) mean += v;
  mean /= static_cast<double>(target.values_db.size());
  CoefficientFilter f;
  f.numerator.assign(order + 1, 0.0);
  f.denominator.assign(order + 1, 0.0);
  f.numerator[0] = std::pow(10.0, mean / 20.0);
  f.denominator[0] = 1.0;
  return f;
}

// Replaces roots outside the unit circle by 1 / conj(root). Radii above
// `max_radius` are then scaled down to it.
std::vector<double> reflect_roots(const std::vector<double>& coeffs, double max_radius) {
  auto roots = z_inverse_roots(coeffs);
  bool changed = false;
  for (auto& r : roots) {
    const double m = std::abs(r);
    if (m > 1.0) {
      r = 1.0 / std::conj(r);
      changed = true;
    }
    if (std::abs(r) > max_radius) {
      r *= max_radius / std::abs(r);
      changed = true;
    }
  }
  if (!changed) return coeffs;
  std::vector<double> out = poly_from_z_inverse_roots(roots);
  for (double& c : out) c *= coeffs[0];
  out.resize(coeffs.size(), 0.0);
  return out;
}

}  // namespace

CoefficientFilter myw_design(const MagnitudeResponse& target, const MywConfig& config) {
  check_finite_target(target);
  const int n = config.order;
  check_order(n);
  const int f = target.grid.size();
  const int lags = config.acf_lags > 0 ? config.acf_lags : 4 * n;
  const int size = config.fft_size > 0 ? config.fft_size : next_pow2(4 * f);
  if (lags < n + 1) throw InvalidArgument("MYW needs acf_lags >= N + 1");
  if (size % 2 != 0 || size < 2 * (f - 1)) {
    throw InvalidArgument("MYW fft_size must be even and >= 2 (F - 1)");
  }
  if (lags >= size / 2) throw InvalidArgument("MYW acf_lags must be < fft_size / 2");

  // (1) power spectrum on the full circle
  const int half = size / 2;
  std::vector<double> db(half + 1);
  for (int k = 0; k <= half; ++k) db[k] = interpolate_db(target, 2.0 * std::numbers::pi * k / size);
  std::vector<std::complex<double>> power(size);
  for (int k = 0; k <= half; ++k) {
    power[k] = std::pow(10.0, db[k] / 10.0);
    if (k > 0 && k < half) power[size - k] = power[k];
  }
  // (2) autocorrelation
  const std::vector<double> r = inverse_fft_real<double>(power);

  // (3) r[m] + sum_k a_k r[m - k] = 0 for m = N+1 .. M, least squares
  Eigen::MatrixXd sys(lags - n, n);
  Eigen::VectorXd rhs(lags - n);
  for (int m = n + 1; m <= lags; ++m) {
    for (int k = 1; k <= n; ++k) sys(m - n - 1, k - 1) = r[m - k];
    rhs(m - n - 1) = -r[m];
  }
  // Sharp resonances make the system numerically rank deficient; the
  // minimum-norm solution still gives a usable denominator there.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(sys);
  if (!(sys.cwiseAbs().maxCoeff() > 1e-12 * std::abs(r[0])) || cod.rank() == 0) {
    return gain_only(target, n);
  }
  const Eigen::VectorXd x = cod.solve(rhs);
  std::vector<double> a(n + 1, 1.0);
  for (int k = 1; k <= n; ++k) a[k] = x(k - 1);
  if (!std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); })) {
    return gain_only(target, n);
  }

  // (4) stabilize
  a = reflect_roots(a, kMaxPoleRadius);

  // (5) minimum-phase numerator with |B| = |H| |A|
  const auto a_spec = real_fft<double>(a, size);
  std::vector<std::complex<double>> log_b(size);
  for (int k = 0; k < size; ++k) {
    const int kk = k <= half ? k : size - k;
    const double log_h = db[kk] / 20.0 * std::numbers::ln10;
    const double log_a = std::log(std::abs(a_spec[k]));
    log_b[k] = std::max(log_h + log_a, kLogMagnitudeFloor);
  }
  std::vector<double> cep = inverse_fft_real<double>(log_b);
  for (int i = 1; i < half; ++i) cep[i] *= 2.0;
  for (int i = half + 1; i < size; ++i) cep[i] = 0.0;
  auto min_spec = real_fft<double>(cep, size);
  for (auto& c : min_spec) c = std::exp(c);
  std::vector<double> b = inverse_fft_real<double>(min_spec);
  b.resize(n + 1);
  b = reflect_roots(b, 1.0);

  // (6) a0 = 1 and zero mean dB error
  CoefficientFilter out;
  out.numerator = std::move(b);
  out.denominator = std::move(a);
  try {
    const double offset = mean_offset_db(target, coeff_response_db(out, target.grid));
    const double scale = std::pow(10.0, offset / 20.0);
    for (double& c : out.numerator) c *= scale;
  } catch (const DegenerateResponse&) {
    return gain_only(target, n);
  }
  return out;
}

namespace {

void draw_root_parts(CascadeParams& p, int index, Rng& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  p.values()[index] = u(rng);
  p.values()[index + 1] = u(rng);
}

bool finite_root(const CascadeParams& p, int index) {
  const Complex r(p.values()[index], p.values()[index + 1]);
  return std::isfinite(r.real()) && std::isfinite(r.imag()) &&
         std::abs(min_phase_project(r)) < 1.0 - 1e-9;
}

}  // namespace

SgdResult sgd_design(const MagnitudeResponse& target, const SgdConfig& config) {
  check_finite_target(target);
  check_order(config.order);
  if (config.steps < 1) throw InvalidArgument("SGD needs steps >= 1");
  if (!(config.lr > 0.0)) throw InvalidArgument("SGD learning rate must be positive");

  const int sections = config.order / 2;
  const LossEvaluator eval(target.grid);
  Rng rng = make_rng(config.seed, Stream::kSgdInit, 0);
  CascadeParams p(sections);
  for (int k = 0; k < sections; ++k) draw_root_parts(p, p.pole_index(k), rng);
  for (int k = 0; k < sections; ++k) draw_root_parts(p, p.zero_index(k), rng);
  p.raw_gain() = eval.flat_match_raw_gain(p, target, config.gain_mode);

  SgdResult result;
  result.best_loss = std::numeric_limits<double>::infinity();
  std::vector<double> m(p.size(), 0.0), v(p.size(), 0.0);
  for (int t = 0; t <= config.steps;) {
    LossAndGrad lg;
    try {
      lg = eval.loss_and_grad(p, target, config.gain_mode);
    } catch (const DegenerateResponse& e) {
      if (++result.reinitializations > config.max_reinit) {
        throw NumericError(std::string("SGD could not recover from a degenerate state: ") + e.what());
      }
      bool any = false;
      for (int k = 0; k < sections; ++k) {
        for (int idx : {p.pole_index(k), p.zero_index(k)}) {
          if (!finite_root(p, idx)) {
            draw_root_parts(p, idx, rng);
            any = true;
          }
        }
      }
      if (!any) {
        for (int i = 1; i < p.size(); i += 2) draw_root_parts(p, i, rng);
      }
      p.raw_gain() = eval.flat_match_raw_gain(p, target, config.gain_mode);
      continue;
    }
    result.loss_trace.push_back(lg.loss);
    if (lg.loss < result.best_loss) {
      result.best_loss = lg.loss;
      result.params = p;
    }
    result.best_trace.push_back(result.best_loss);
    if (t == config.steps) break;
    ++t;
    auto values = p.values();
    if (config.optimizer == SgdOptimizer::kPlain) {
      for (int i = 0; i < p.size(); ++i) values[i] -= config.lr * lg.grad[i];
    } else {
      const AdamWConfig& c = config.adam;
      const double bc1 = 1.0 - std::pow(c.beta1, t);
      const double bc2 = 1.0 - std::pow(c.beta2, t);
      for (int i = 0; i < p.size(); ++i) {
        const double g = lg.grad[i];
        m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
        v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
        values[i] -= config.lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + c.epsilon);
      }
    }
  }
  result.cascade = params_to_cascade(result.params, config.gain_mode);
  return result;
}

}  // namespace iirfit
