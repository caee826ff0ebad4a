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
// Random target filters from six families of random polynomials plus their
// uniform mixture:
//
//   A  normal coefficients         numerator/denominator with N(0,1) coefficients
//   B  normal biquads              product of N/2 quadratics with N(0,1) coefficients
//   C  uniform disk                roots r = sqrt(U), theta ~ U[0, 2 pi)
//   D  uniform magnitude           roots r = U, theta ~ U[0, 2 pi)
//   E  characteristic polynomial   eigenvalues of a scaled N x N Gaussian matrix
//   F  uniform parametric EQ       low shelf + high shelf + (N-4)/2 peaks
//   G  all families                A..F chosen uniformly per draw
//
// Every draw is addressed by (master seed, stream tag, draw index, attempt),
// so datasets can be regenerated in any order on any number of workers.

#ifndef IIRFIT_RANDFILT_H_
#define IIRFIT_RANDFILT_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "iirfit/dsp.h"

namespace iirfit {

enum class Family { kA, kB, kC, kD, kE, kF, kG };

inline constexpr Family kBaseFamilies[] = {Family::kA, Family::kB, Family::kC,
                                           Family::kD, Family::kE, Family::kF};

char family_tag(Family family);
std::string family_name(Family family);
// Accepts "A".."G" (case-insensitive). Throws InvalidArgument.
Family parse_family(std::string_view tag);

using Rng = std::mt19937_64;

// Stream tags keep training, evaluation and generation draws disjoint.
enum class Stream : std::uint64_t {
  kTrain = 0x7472'6169'6e00'0001,
  kEval = 0x6576'616c'0000'0002,
  kGenerate = 0x6765'6e00'0000'0003,
  kSgdInit = 0x7367'6400'0000'0004,
  kModelInit = 0x696e'6974'0000'0005,
  kTest = 0x7465'7374'0000'0006,
};

std::uint64_t derive_seed(std::uint64_t master, Stream stream,
                          std::uint64_t index, std::uint64_t attempt = 0);
Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index,
             std::uint64_t attempt = 0);

struct RandomFilterSpec {
  Family family = Family::kG;
  int order = 16;
  std::uint64_t seed = 0;
};

struct EqBand {
  double freq_hz = 1000.0;
  double gain_db = 0.0;
  double q = 0.707;
};

struct ParametricEqParams {
  EqBand low_shelf;
  EqBand high_shelf;
  std::vector<EqBand> peaks;
};

// Parameter ranges for family F. Frequencies are log-uniform in
// [f_lo_hz, f_hi_fraction * fs]; gains and Q are uniform.
struct EqRanges {
  double sample_rate_hz = 44100.0;
  double f_lo_hz = 20.0;
  double f_hi_fraction = 0.45;
  double gain_db_lo = -24.0;
  double gain_db_hi = 24.0;
  double shelf_q_lo = 0.5;
  double shelf_q_hi = 4.0;
  double peak_q_lo = 0.1;
  double peak_q_hi = 10.0;
};

struct SamplerOptions {
  EqRanges eq;
  // Family E eigenvalue scale; <= 0 selects 1 / sqrt(N).
  double eigen_scale = 0.0;
};

nlohmann::json eq_ranges_to_json(const EqRanges& ranges);
EqRanges eq_ranges_from_json(const nlohmann::json& j);

// Bilinear-transform audio EQ prototypes, normalized to a0 = 1.
Biquad low_shelf(const EqBand& band, double sample_rate_hz);
Biquad high_shelf(const EqBand& band, double sample_rate_hz);
Biquad peaking(const EqBand& band, double sample_rate_hz);

CoefficientFilter sample_family_a(int order, Rng& rng);
CoefficientFilter sample_family_b(int order, Rng& rng);
FilterCascade sample_family_c(int order, Rng& rng);
FilterCascade sample_family_d(int order, Rng& rng);

// Eigenvalues of an n x n matrix with i.i.d. N(0,1) entries, times `scale`.
std::vector<Complex> characteristic_roots(int n, Rng& rng, double scale);

// Family E. Real eigenvalues are paired into sections with two real roots,
// so the result is section-form rather than a FilterCascade.
CoefficientFilter sample_family_e(int order, Rng& rng, double scale = 0.0);

ParametricEqParams sample_eq_params(int order, Rng& rng, const EqRanges& ranges);
CoefficientFilter design_parametric_eq(const ParametricEqParams& params,
                                       double sample_rate_hz);
CoefficientFilter sample_family_f(int order, Rng& rng,
                                  const EqRanges& ranges = {});

using TargetFilter = std::variant<CoefficientFilter, FilterCascade>;

struct SampledFilter {
  Family family;  // the concrete family A..F that produced the filter
  TargetFilter filter;
};

// Draws from `family`; for G a family tag is drawn uniformly first.
SampledFilter sample_family(Family family, int order, Rng& rng,
                            const SamplerOptions& options = {});
SampledFilter sample_family_g(int order, Rng& rng,
                              const SamplerOptions& options = {});

MagnitudeResponse target_response(const TargetFilter& filter,
                                  const FrequencyGrid& grid);

// Expanded coefficient form of either representation.
CoefficientFilter to_coefficients(const TargetFilter& filter);

struct TargetDraw {
  SampledFilter sampled;
  MagnitudeResponse response;
  int attempts = 1;
};

// Draw `index` of `stream`: samples a filter and its response, resampling
// (with a fresh attempt counter) on degenerate responses or eigensolver
// failures. Throws NumericError after 64 failed attempts.
TargetDraw draw_target(const RandomFilterSpec& spec, Stream stream,
                       std::uint64_t index, const FrequencyGrid& grid,
                       const SamplerOptions& options = {});

// Dataset manifest; datasets are regenerated from it rather than stored.
struct DatasetManifest {
  Family family = Family::kG;
  int order = 16;
  std::uint64_t seed = 0;
  std::int64_t count = 1000;
  int f_count = 512;
  double sample_rate_hz = 44100.0;
  EqRanges eq_ranges;
};

nlohmann::json manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);

}  // namespace iirfit

#endif  // IIRFIT_RANDFILT_H_
