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

#include "iirfit/dsp.h"

#include <cmath>
#include <numbers>
#include <string>

#include "iirfit/errors.h"
#include "iirfit/fft.h"
#include "section_math.h"

namespace iirfit {

FrequencyGrid::FrequencyGrid(int f_count, double sample_rate_hz)
    : sample_rate_hz_(sample_rate_hz) {
  if (f_count < 2) {
    throw InvalidArgument("frequency grid needs at least 2 points, got " +
                          std::to_string(f_count));
  }
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
    throw InvalidArgument("sample rate must be positive");
  }
  omegas_.resize(f_count);
  const double last = f_count - 1;
  for (int j = 0; j < f_count; ++j) {
    omegas_[j] = std::numbers::pi * (j / last);
  }
  omegas_.back() = std::numbers::pi;
}

double FrequencyGrid::hz(int j) const {
  return omegas_[j] / std::numbers::pi * (sample_rate_hz_ / 2.0);
}

FrequencyGrid make_grid(int f_count, double sample_rate_hz) {
  return FrequencyGrid(f_count, sample_rate_hz);
}

std::vector<double> poly_multiply(std::span<const double> x,
                                  std::span<const double> y) {
  if (x.empty() || y.empty()) return {};
  std::vector<long double> acc(x.size() + y.size() - 1, 0.0L);
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = 0; j < y.size(); ++j) {
      acc[i + j] += static_cast<long double>(x[i]) * y[j];
    }
  }
  return {acc.begin(), acc.end()};
}

CoefficientFilter CoefficientFilter::FromSections(std::vector<Biquad> sections) {
  // Whole product in extended precision, rounded once at the end.
  std::vector<long double> num = {1.0L};
  std::vector<long double> den = {1.0L};
  auto times = [](std::vector<long double>& acc, double c0, double c1, double c2) {
    acc.resize(acc.size() + 2, 0.0L);
    for (size_t i = acc.size() - 1; i-- > 0;) {
      const long double x = acc[i];
      acc[i] = x * c0;
      acc[i + 1] += x * c1;
      if (i + 2 < acc.size()) acc[i + 2] += x * c2;
    }
  };
  for (const Biquad& s : sections) {
    times(num, s.b0, s.b1, s.b2);
    times(den, s.a0, s.a1, s.a2);
  }
  CoefficientFilter filter;
  filter.numerator.assign(num.begin(), num.end());
  filter.denominator.assign(den.begin(), den.end());
  filter.sections = std::move(sections);
  return filter;
}

Complex eval_z_inverse(std::span<const double> coeffs, double omega) {
  using LComplex = std::complex<long double>;
  const long double w = omega;
  const LComplex zinv(std::cos(w), -std::sin(w));
  LComplex acc(0.0L, 0.0L);
  for (size_t k = coeffs.size(); k-- > 0;) {
    acc = acc * zinv + static_cast<long double>(coeffs[k]);
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

double biquad_db(const Biquad& s, double omega) {
  const double b[3] = {s.b0, s.b1, s.b2};
  const double a[3] = {s.a0, s.a1, s.a2};
  const double num = std::abs(eval_z_inverse(b, omega));
  const double den = std::abs(eval_z_inverse(a, omega));
  return 20.0 * std::log10(num / den);
}

namespace {

void check_finite(const MagnitudeResponse& r, const char* what) {
  for (int j = 0; j < r.grid.size(); ++j) {
    if (!std::isfinite(r.values_db[j])) {
      throw DegenerateResponse(std::string(what) +
                               ": response is not finite at omega = " +
                               std::to_string(r.grid.omega(j)));
    }
  }
}

}  // namespace

MagnitudeResponse cascade_response_db(const FilterCascade& cascade,
                                      const FrequencyGrid& grid) {
  if (cascade.poles.size() != cascade.zeros.size()) {
    throw InvalidArgument("cascade needs equal numbers of poles and zeros");
  }
  if (!(cascade.gain > 0.0)) {
    throw InvalidArgument("cascade gain must be positive");
  }
  MagnitudeResponse out{grid, std::vector<double>(grid.size())};
  const double gain_db = 20.0 * std::log10(cascade.gain);
  for (int j = 0; j < grid.size(); ++j) {
    const internal::Trig t(grid.omega(j));
    double db = gain_db;
    for (int k = 0; k < cascade.num_sections(); ++k) {
      const double e_num = internal::pair_energy(cascade.zeros[k], t);
      const double e_den = internal::pair_energy(cascade.poles[k], t);
      if (e_den == 0.0) {
        throw DegenerateResponse("cascade pole lies on the unit circle at omega = " +
                                 std::to_string(grid.omega(j)));
      }
      db += internal::kPowerToDb * std::log10(e_num / e_den);
    }
    out.values_db[j] = db;
  }
  check_finite(out, "cascade_response_db");
  return out;
}

namespace {

void check_coefficients(const CoefficientFilter& filter) {
  if (filter.numerator.empty() || filter.denominator.empty()) {
    throw InvalidArgument("coefficient filter needs numerator and denominator");
  }
  if (filter.denominator[0] == 0.0) {
    throw InvalidArgument("leading denominator coefficient a0 must be nonzero");
  }
}

}  // namespace

MagnitudeResponse coeff_response_db(const CoefficientFilter& filter,
                                    const FrequencyGrid& grid) {
  check_coefficients(filter);
  MagnitudeResponse out{grid, std::vector<double>(grid.size())};
  for (int j = 0; j < grid.size(); ++j) {
    const double num = std::abs(eval_z_inverse(filter.numerator, grid.omega(j)));
    const double den = std::abs(eval_z_inverse(filter.denominator, grid.omega(j)));
    if (den == 0.0) {
      throw DegenerateResponse("denominator vanishes at omega = " +
                               std::to_string(grid.omega(j)));
    }
    out.values_db[j] = 20.0 * std::log10(num / den);
  }
  check_finite(out, "coeff_response_db");
  return out;
}

MagnitudeResponse coeff_response_db_fft(const CoefficientFilter& filter,
                                        const FrequencyGrid& grid) {
  check_coefficients(filter);
  const int size = 2 * (grid.size() - 1);
  const std::vector<long double> b(filter.numerator.begin(),
                                   filter.numerator.end());
  const std::vector<long double> a(filter.denominator.begin(),
                                   filter.denominator.end());
  const auto num = real_fft<long double>(b, size);
  const auto den = real_fft<long double>(a, size);
  MagnitudeResponse out{grid, std::vector<double>(grid.size())};
  for (int j = 0; j < grid.size(); ++j) {
    const long double d = std::abs(den[j]);
    if (d == 0.0L) {
      throw DegenerateResponse("denominator vanishes at omega = " +
                               std::to_string(grid.omega(j)));
    }
    out.values_db[j] =
        static_cast<double>(20.0L * std::log10(std::abs(num[j]) / d));
  }
  check_finite(out, "coeff_response_db_fft");
  return out;
}

Complex min_phase_project(Complex root) {
  const double m = std::abs(root);
  if (m == 0.0) return {0.0, 0.0};
  const double scale =
      (1.0 - kMinPhaseEpsilon) * std::tanh(m) / (m + kMinPhaseEpsilon);
  return root * scale;
}

CoefficientFilter sections_from_cascade(const FilterCascade& cascade) {
  if (cascade.poles.size() != cascade.zeros.size()) {
    throw InvalidArgument("cascade needs equal numbers of poles and zeros");
  }
  std::vector<Biquad> sections;
  sections.reserve(cascade.num_sections());
  for (int k = 0; k < cascade.num_sections(); ++k) {
    const Complex z = cascade.zeros[k];
    const Complex p = cascade.poles[k];
    Biquad s;
    s.b0 = 1.0;
    s.b1 = -2.0 * z.real();
    s.b2 = std::norm(z);
    s.a0 = 1.0;
    s.a1 = -2.0 * p.real();
    s.a2 = std::norm(p);
    if (k == 0) {
      s.b0 *= cascade.gain;
      s.b1 *= cascade.gain;
      s.b2 *= cascade.gain;
    }
    sections.push_back(s);
  }
  if (sections.empty()) {
    CoefficientFilter gain_only;
    gain_only.numerator = {cascade.gain};
    gain_only.denominator = {1.0};
    return gain_only;
  }
  return CoefficientFilter::FromSections(std::move(sections));
}

double db_mse(const MagnitudeResponse& estimate,
              const MagnitudeResponse& target) {
  if (!(estimate.grid == target.grid) ||
      estimate.values_db.size() != target.values_db.size()) {
    throw GridMismatch("db_mse: responses are on different grids");
  }
  double sum = 0.0;
  for (size_t j = 0; j < target.values_db.size(); ++j) {
    const double d = estimate.values_db[j] - target.values_db[j];
    sum += d * d;
  }
  return sum / static_cast<double>(target.values_db.size());
}

std::vector<double> normalize_for_network(const MagnitudeResponse& target) {
  std::vector<double> x(target.values_db.size());
  for (size_t j = 0; j < x.size(); ++j) {
    x[j] = std::clamp(target.values_db[j], -kNetworkClipDb, kNetworkClipDb) /
           kNetworkClipDb;
  }
  return x;
}

}  // namespace iirfit
