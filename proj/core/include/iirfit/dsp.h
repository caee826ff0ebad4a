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

// Magnitude-response mathematics for biquad cascades and coefficient-form
// IIR filters. Everything here works in double precision and in decibels
// (20 * log10 |H|), which is the single log scale used by the loss, the
// network input and every report.

#ifndef IIRFIT_DSP_H_
#define IIRFIT_DSP_H_

#include <algorithm>
#include <complex>
#include <span>
#include <vector>

namespace iirfit {

using Complex = std::complex<double>;

// Offset that keeps projected roots off the origin and off the unit circle.
inline constexpr double kMinPhaseEpsilon = 1e-8;

// Responses are clamped to +/- this many dB before being fed to the network.
inline constexpr double kNetworkClipDb = 128.0;

// F angular frequencies linearly spaced over [0, pi] (i.e. [0, fs/2]).
class FrequencyGrid {
 public:
  // Throws InvalidArgument if f_count < 2 or sample_rate_hz <= 0.
  FrequencyGrid(int f_count, double sample_rate_hz);

  int size() const { return static_cast<int>(omegas_.size()); }
  double sample_rate_hz() const { return sample_rate_hz_; }
  std::span<const double> omegas() const { return omegas_; }
  double omega(int j) const { return omegas_[j]; }
  double hz(int j) const;

  bool operator==(const FrequencyGrid& other) const {
    return size() == other.size() && sample_rate_hz_ == other.sample_rate_hz_;
  }

 private:
  double sample_rate_hz_;
  std::vector<double> omegas_;
};

FrequencyGrid make_grid(int f_count, double sample_rate_hz);

struct MagnitudeResponse {
  FrequencyGrid grid;
  std::vector<double> values_db;
};

// Scalar gain plus K poles and K zeros; each root stands for itself and its
// complex conjugate, so the cascade has order N = 2K and real coefficients.
struct FilterCascade {
  double gain = 1.0;
  std::vector<Complex> poles;
  std::vector<Complex> zeros;

  int num_sections() const { return static_cast<int>(poles.size()); }
  int order() const { return 2 * num_sections(); }
};

struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a0 = 1.0, a1 = 0.0, a2 = 0.0;
};

// Numerator b_0..b_N over denominator a_0..a_N in powers of z^-1. When
// `sections` is non-empty their product equals numerator / denominator.
struct CoefficientFilter {
  std::vector<double> numerator;
  std::vector<double> denominator;
  std::vector<Biquad> sections;

  int order() const {
    return static_cast<int>(std::max(numerator.size(), denominator.size())) - 1;
  }

  // Expands the sections into numerator/denominator by convolution.
  static CoefficientFilter FromSections(std::vector<Biquad> sections);
};

// Polynomial product (full linear convolution).
std::vector<double> poly_multiply(std::span<const double> x,
                                  std::span<const double> y);

// Complex value of sum_k c[k] * w^k with w = exp(-i*omega). Uses extended
// precision Horner accumulation.
Complex eval_z_inverse(std::span<const double> coeffs, double omega);

// |num(e^iw) / den(e^iw)| in dB for a single biquad.
double biquad_db(const Biquad& section, double omega);

// 20 log10 G + sum over sections of the conjugate-pair biquad dB values.
// Throws DegenerateResponse if a denominator vanishes on the grid.
MagnitudeResponse cascade_response_db(const FilterCascade& cascade,
                                      const FrequencyGrid& grid);

// Direct evaluation of 20 log10(|B| / |A|) on every grid point.
MagnitudeResponse coeff_response_db(const CoefficientFilter& filter,
                                    const FrequencyGrid& grid);

// Same as coeff_response_db, computed with a zero-padded FFT of size
// 2 * (F - 1). Coefficient sequences longer than the FFT are time-aliased,
// which leaves the sampled response unchanged.
MagnitudeResponse coeff_response_db_fft(const CoefficientFilter& filter,
                                        const FrequencyGrid& grid);

// r -> (1 - eps) * r * tanh(|r|) / (|r| + eps). The result lies strictly
// inside the unit circle and keeps the argument of r.
Complex min_phase_project(Complex root);

// Conjugate-pair expansion 1 - 2 Re(q) z^-1 + |q|^2 z^-2 for every root;
// the gain is folded into the b coefficients of the first section.
CoefficientFilter sections_from_cascade(const FilterCascade& cascade);

// Mean over the grid of the squared dB difference. Throws GridMismatch.
double db_mse(const MagnitudeResponse& estimate,
              const MagnitudeResponse& target);

// Clamp to [-128, 128] dB then scale to [-1, 1].
std::vector<double> normalize_for_network(const MagnitudeResponse& target);

}  // namespace iirfit

#endif  // IIRFIT_DSP_H_
