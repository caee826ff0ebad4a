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

#include "iirfit/randfilt.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "iirfit/errors.h"
#include "iirfit/polyroots.h"

namespace iirfit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_order(int order, int minimum) {
  if (order < minimum || order % 2 != 0) {
    throw InvalidArgument("filter order must be even and >= " +
                          std::to_string(minimum) + ", got " +
                          std::to_string(order));
  }
}

std::vector<double> normal_vector(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

// Roots uniform in angle with radius drawn by `radius(u)`.
template <typename RadiusFn>
std::vector<Complex> disk_roots(int count, Rng& rng, RadiusFn radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Complex> roots(count);
  for (Complex& r : roots) {
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    r = std::polar(radius(unit(rng)), theta);
  }
  return roots;
}

// Quadratic factors 1 - (r1 + r2) u + r1 r2 u^2 for a real-coefficient root
// set: one factor per conjugate pair, real roots paired in sorted order.
std::vector<std::array<double, 3>> quadratics_from_roots(
    const std::vector<Complex>& roots) {
  std::vector<std::array<double, 3>> out;
  std::vector<double> reals;
  for (const Complex& r : roots) {
    if (r.imag() == 0.0) {
      reals.push_back(r.real());
    } else if (r.imag() > 0.0) {
      out.push_back({1.0, -2.0 * r.real(), std::norm(r)});
    }
  }
  std::sort(reals.begin(), reals.end());
  for (size_t i = 0; i + 1 < reals.size(); i += 2) {
    out.push_back({1.0, -(reals[i] + reals[i + 1]), reals[i] * reals[i + 1]});
  }
  if (reals.size() % 2 == 1) out.push_back({1.0, -reals.back(), 0.0});
  return out;
}

}  // namespace

char family_tag(Family family) {
  return static_cast<char>('A' + static_cast<int>(family));
}

std::string family_name(Family family) {
  switch (family) {
    case Family::kA: return "NormalCoefficients";
    case Family::kB: return "NormalBiquads";
    case Family::kC: return "UniformDisk";
    case Family::kD: return "UniformMagnitude";
    case Family::kE: return "CharacteristicPolynomial";
    case Family::kF: return "UniformParametricEq";
    case Family::kG: return "AllFamilies";
  }
  return "?";
}

Family parse_family(std::string_view tag) {
  if (tag.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(tag[0])));
    if (c >= 'A' && c <= 'G') return static_cast<Family>(c - 'A');
  }
  for (int i = 0; i <= static_cast<int>(Family::kG); ++i) {
    if (tag == family_name(static_cast<Family>(i))) return static_cast<Family>(i);
  }
  throw InvalidArgument("unknown filter family '" + std::string(tag) +
                        "' (expected A..G)");
}

std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                          std::uint64_t index, std::uint64_t attempt) {
  std::uint64_t h = splitmix64(master);
  h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
  h = splitmix64(h ^ index);
  return splitmix64(h ^ (attempt * 0xd1b54a32d192ed03ULL));
}

Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index,
             std::uint64_t attempt) {
  return Rng(derive_seed(master, stream, index, attempt));
}

nlohmann::json eq_ranges_to_json(const EqRanges& r) {
  return {{"sample_rate_hz", r.sample_rate_hz}, {"f_lo_hz", r.f_lo_hz},
          {"f_hi_fraction", r.f_hi_fraction},   {"gain_db_lo", r.gain_db_lo},
          {"gain_db_hi", r.gain_db_hi},         {"shelf_q_lo", r.shelf_q_lo},
          {"shelf_q_hi", r.shelf_q_hi},         {"peak_q_lo", r.peak_q_lo},
          {"peak_q_hi", r.peak_q_hi}};
}

EqRanges eq_ranges_from_json(const nlohmann::json& j) {
  EqRanges r;
  r.sample_rate_hz = j.value("sample_rate_hz", r.sample_rate_hz);
  r.f_lo_hz = j.value("f_lo_hz", r.f_lo_hz);
  r.f_hi_fraction = j.value("f_hi_fraction", r.f_hi_fraction);
  r.gain_db_lo = j.value("gain_db_lo", r.gain_db_lo);
  r.gain_db_hi = j.value("gain_db_hi", r.gain_db_hi);
  r.shelf_q_lo = j.value("shelf_q_lo", r.shelf_q_lo);
  r.shelf_q_hi = j.value("shelf_q_hi", r.shelf_q_hi);
  r.peak_q_lo = j.value("peak_q_lo", r.peak_q_lo);
  r.peak_q_hi = j.value("peak_q_hi", r.peak_q_hi);
  return r;
}

namespace {

struct ShelfTerms {
  double a, cw, sqrt_a_alpha;
};

ShelfTerms shelf_terms(const EqBand& band, double fs) {
  const double a = std::pow(10.0, band.gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * band.freq_hz / fs;
  const double alpha = std::sin(w0) / (2.0 * band.q);
  return {a, std::cos(w0), 2.0 * std::sqrt(a) * alpha};
}

Biquad normalized(double b0, double b1, double b2, double a0, double a1,
                  double a2) {
  return Biquad{b0 / a0, b1 / a0, b2 / a0, 1.0, a1 / a0, a2 / a0};
}

}  // namespace

Biquad low_shelf(const EqBand& band, double fs) {
  const auto [a, cw, k] = shelf_terms(band, fs);
  return normalized(a * ((a + 1) - (a - 1) * cw + k),
                    2 * a * ((a - 1) - (a + 1) * cw),
                    a * ((a + 1) - (a - 1) * cw - k),
                    (a + 1) + (a - 1) * cw + k,
                    -2 * ((a - 1) + (a + 1) * cw),
                    (a + 1) + (a - 1) * cw - k);
}

Biquad high_shelf(const EqBand& band, double fs) {
  const auto [a, cw, k] = shelf_terms(band, fs);
  return normalized(a * ((a + 1) + (a - 1) * cw + k),
                    -2 * a * ((a - 1) + (a + 1) * cw),
                    a * ((a + 1) + (a - 1) * cw - k),
                    (a + 1) - (a - 1) * cw + k,
                    2 * ((a - 1) - (a + 1) * cw),
                    (a + 1) - (a - 1) * cw - k);
}

Biquad peaking(const EqBand& band, double fs) {
  const double a = std::pow(10.0, band.gain_db / 40.0);
  const double w0 = 2.0 * std::numbers::pi * band.freq_hz / fs;
  const double alpha = std::sin(w0) / (2.0 * band.q);
  const double cw = std::cos(w0);
  return normalized(1 + alpha * a, -2 * cw, 1 - alpha * a,
                    1 + alpha / a, -2 * cw, 1 - alpha / a);
}

CoefficientFilter sample_family_a(int order, Rng& rng) {
  check_order(order, 2);
  CoefficientFilter f;
  f.numerator = normal_vector(order + 1, rng);
  f.denominator = normal_vector(order + 1, rng);
  return f;
}

CoefficientFilter sample_family_b(int order, Rng& rng) {
  check_order(order, 2);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Biquad> sections(order / 2);
  for (Biquad& s : sections) {
    s.b0 = normal(rng);
    s.b1 = normal(rng);
    s.b2 = normal(rng);
  }
  for (Biquad& s : sections) {
    s.a0 = normal(rng);
    s.a1 = normal(rng);
    s.a2 = normal(rng);
  }
  return CoefficientFilter::FromSections(std::move(sections));
}

FilterCascade sample_family_c(int order, Rng& rng) {
  check_order(order, 2);
  FilterCascade c;
  c.gain = 1.0;
  c.poles = disk_roots(order / 2, rng, [](double u) { return std::sqrt(u); });
  c.zeros = disk_roots(order / 2, rng, [](double u) { return std::sqrt(u); });
  return c;
}

FilterCascade sample_family_d(int order, Rng& rng) {
  check_order(order, 2);
  FilterCascade c;
  c.gain = 1.0;
  c.poles = disk_roots(order / 2, rng, [](double u) { return u; });
  c.zeros = disk_roots(order / 2, rng, [](double u) { return u; });
  return c;
}

std::vector<Complex> characteristic_roots(int n, Rng& rng, double scale) {
  if (n < 1) throw InvalidArgument("matrix size must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) m(i, j) = normal(rng);
  }
  auto roots = eigenvalues(m);
  for (Complex& r : roots) r *= scale;
  return roots;
}

CoefficientFilter sample_family_e(int order, Rng& rng, double scale) {
  check_order(order, 2);
  if (scale <= 0.0) scale = 1.0 / std::sqrt(static_cast<double>(order));
  const auto poles = quadratics_from_roots(characteristic_roots(order, rng, scale));
  const auto zeros = quadratics_from_roots(characteristic_roots(order, rng, scale));
  std::vector<Biquad> sections(order / 2);
  for (size_t k = 0; k < sections.size(); ++k) {
    const auto& b = zeros[k];
    const auto& a = poles[k];
    sections[k] = Biquad{b[0], b[1], b[2], a[0], a[1], a[2]};
  }
  return CoefficientFilter::FromSections(std::move(sections));
}

ParametricEqParams sample_eq_params(int order, Rng& rng,
                                    const EqRanges& ranges) {
  check_order(order, 4);
  const double f_hi = ranges.f_hi_fraction * ranges.sample_rate_hz;
  if (!(ranges.f_lo_hz > 0.0) || !(f_hi > ranges.f_lo_hz) ||
      !(f_hi < ranges.sample_rate_hz / 2.0)) {
    throw InvalidArgument("EQ frequency range must satisfy 0 < lo < hi < fs/2");
  }
  std::uniform_real_distribution<double> log_freq(std::log(ranges.f_lo_hz),
                                                  std::log(f_hi));
  std::uniform_real_distribution<double> gain(ranges.gain_db_lo,
                                              ranges.gain_db_hi);
  std::uniform_real_distribution<double> shelf_q(ranges.shelf_q_lo,
                                                 ranges.shelf_q_hi);
  std::uniform_real_distribution<double> peak_q(ranges.peak_q_lo,
                                                ranges.peak_q_hi);
  auto band = [&](auto& q_dist) {
    EqBand b;
    b.freq_hz = std::exp(log_freq(rng));
    b.gain_db = gain(rng);
    b.q = q_dist(rng);
    return b;
  };
  ParametricEqParams p;
  p.low_shelf = band(shelf_q);
  p.high_shelf = band(shelf_q);
  p.peaks.resize((order - 4) / 2);
  for (EqBand& b : p.peaks) b = band(peak_q);
  return p;
}

CoefficientFilter design_parametric_eq(const ParametricEqParams& params,
                                       double sample_rate_hz) {
  std::vector<Biquad> sections;
  sections.push_back(low_shelf(params.low_shelf, sample_rate_hz));
  sections.push_back(high_shelf(params.high_shelf, sample_rate_hz));
  for (const EqBand& b : params.peaks) {
    sections.push_back(peaking(b, sample_rate_hz));
  }
  return CoefficientFilter::FromSections(std::move(sections));
}

CoefficientFilter sample_family_f(int order, Rng& rng, const EqRanges& ranges) {
  return design_parametric_eq(sample_eq_params(order, rng, ranges),
                              ranges.sample_rate_hz);
}

SampledFilter sample_family_g(int order, Rng& rng,
                              const SamplerOptions& options) {
  check_order(order, 4);
  std::uniform_int_distribution<int> pick(0, 5);
  return sample_family(kBaseFamilies[pick(rng)], order, rng, options);
}

SampledFilter sample_family(Family family, int order, Rng& rng,
                            const SamplerOptions& options) {
  switch (family) {
    case Family::kA: return {family, sample_family_a(order, rng)};
    case Family::kB: return {family, sample_family_b(order, rng)};
    case Family::kC: return {family, sample_family_c(order, rng)};
    case Family::kD: return {family, sample_family_d(order, rng)};
    case Family::kE:
      return {family, sample_family_e(order, rng, options.eigen_scale)};
    case Family::kF: return {family, sample_family_f(order, rng, options.eq)};
    case Family::kG: return sample_family_g(order, rng, options);
  }
  throw InvalidArgument("unknown family");
}

MagnitudeResponse target_response(const TargetFilter& filter,
                                  const FrequencyGrid& grid) {
  if (const auto* coeffs = std::get_if<CoefficientFilter>(&filter)) {
    return coeff_response_db(*coeffs, grid);
  }
  return cascade_response_db(std::get<FilterCascade>(filter), grid);
}

CoefficientFilter to_coefficients(const TargetFilter& filter) {
  if (const auto* coeffs = std::get_if<CoefficientFilter>(&filter)) {
    return *coeffs;
  }
  return sections_from_cascade(std::get<FilterCascade>(filter));
}

TargetDraw draw_target(const RandomFilterSpec& spec, Stream stream,
                       std::uint64_t index, const FrequencyGrid& grid,
                       const SamplerOptions& options) {
  constexpr int kMaxAttempts = 64;
  SamplerOptions local = options;
  local.eq.sample_rate_hz = grid.sample_rate_hz();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng = make_rng(spec.seed, stream, index, attempt);
    try {
      SampledFilter sampled = sample_family(spec.family, spec.order, rng, local);
      MagnitudeResponse response = target_response(sampled.filter, grid);
      return {std::move(sampled), std::move(response), attempt + 1};
    } catch (const NumericError&) {
      // Degenerate response or eigensolver failure: resample.
    }
  }
  throw NumericError("draw_target: no valid filter after 64 attempts at index " +
                     std::to_string(index));
}

nlohmann::json manifest_to_json(const DatasetManifest& m) {
  return {{"family", std::string(1, family_tag(m.family))},
          {"order", m.order},
          {"seed", m.seed},
          {"count", m.count},
          {"f_count", m.f_count},
          {"sample_rate_hz", m.sample_rate_hz},
          {"eq_ranges", eq_ranges_to_json(m.eq_ranges)}};
}

DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.family = parse_family(j.at("family").get<std::string>());
    m.order = j.at("order").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.count = j.at("count").get<std::int64_t>();
    m.f_count = j.value("f_count", m.f_count);
    m.sample_rate_hz = j.value("sample_rate_hz", m.sample_rate_hz);
    if (j.contains("eq_ranges")) m.eq_ranges = eq_ranges_from_json(j.at("eq_ranges"));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed dataset manifest: ") + e.what());
  }
}

}  // namespace iirfit
