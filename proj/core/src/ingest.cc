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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "iirfit/errors.h"
#include "iirfit/fft.h"
#include "iirfit/ingest.h"
#include "iirfit/randfilt.h"

namespace iirfit {

namespace {

constexpr double kFloorDb = -128.0;

// RBJ cookbook second-order low-pass and high-pass, a0 = 1.
Biquad rbj_pass(double freq_hz, double q, double fs, bool high) {
  const double w0 = 2.0 * std::numbers::pi * freq_hz / fs;
  const double cw = std::cos(w0);
  const double alpha = std::sin(w0) / (2.0 * q);
  const double a0 = 1.0 + alpha;
  const double b1 = high ? -(1.0 + cw) : 1.0 - cw;
  const double b0 = high ? (1.0 + cw) / 2.0 : (1.0 - cw) / 2.0;
  return Biquad{b0 / a0, b1 / a0, b0 / a0, 1.0, -2.0 * cw / a0, (1.0 - alpha) / a0};
}

// Transposed direct form II over a delayed unit impulse.
std::vector<double> impulse_through(std::span<const Biquad> sections, double gain, int delay,
                                    int length) {
  std::vector<double> y(length, 0.0);
  y[delay] = gain;
  for (const Biquad& s : sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : y) {
      const double x = v;
      const double out = s.b0 * x + z1;
      z1 = s.b1 * x - s.a1 * out + z2;
      z2 = s.b2 * x - s.a2 * out;
      v = out;
    }
  }
  return y;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void check_count(int count) {
  if (count < 0) throw InvalidArgument("synthetic set size must be non-negative");
}

}  // namespace

MagnitudeResponse ir_to_magnitude(const ImpulseResponse& ir, const FrequencyGrid& grid) {
  const int n = static_cast<int>(ir.samples.size());
  if (n < 2) throw InvalidArgument("impulse response needs at least 2 samples");
  if (std::all_of(ir.samples.begin(), ir.samples.end(), [](double v) { return v == 0.0; })) {
    throw InvalidArgument("impulse response is all zeros");
  }
  const double nyquist = 0.5 * ir.sample_rate_hz;
  if (grid.hz(grid.size() - 1) > nyquist * (1.0 + 1e-12)) {
    throw InvalidArgument("grid extends past the impulse response's Nyquist frequency");
  }
  const int size = next_pow2(4 * n);
  const auto spectrum = real_fft<double>(ir.samples, size);
  const int bins = size / 2 + 1;
  std::vector<double> db(bins);
  const double floor_mag = std::pow(10.0, kFloorDb / 20.0);
  for (int k = 0; k < bins; ++k) {
    db[k] = 20.0 * std::log10(std::max(std::abs(spectrum[k]), floor_mag));
  }
  MagnitudeResponse out{grid, std::vector<double>(grid.size())};
  const double bins_per_hz = size / ir.sample_rate_hz;
  for (int j = 0; j < grid.size(); ++j) {
    const double pos = std::min(grid.hz(j) * bins_per_hz, static_cast<double>(bins - 1));
    const int k = std::min(static_cast<int>(pos), bins - 2);
    const double t = pos - k;
    out.values_db[j] = t == 0.0 ? db[k] : (1.0 - t) * db[k] + t * db[k + 1];
  }
  return out;
}

MagnitudeResponse ir_to_target(const ImpulseResponse& ir, const FrequencyGrid& grid,
                               const SmoothingConfig& smoothing) {
  smoothing.validate();
  ImpulseResponse at_rate = ir;
  if (ir.sample_rate_hz != grid.sample_rate_hz()) {
    // resample keeps signal amplitude; an IR must keep its frequency
    // response, which needs the extra from/to factor.
    at_rate = resample(ir, grid.sample_rate_hz());
    const double scale = ir.sample_rate_hz / grid.sample_rate_hz();
    for (double& v : at_rate.samples) v *= scale;
  }
  return savgol_smooth(ir_to_magnitude(at_rate, grid), smoothing);
}

std::vector<ImpulseResponse> synthetic_hrtf_set(int count, std::uint64_t seed,
                                                double sample_rate_hz) {
  check_count(count);
  const double fs = sample_rate_hz;
  std::vector<ImpulseResponse> out;
  for (int i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, Stream::kGenerate, static_cast<std::uint64_t>(i), 0x68727466);
    std::vector<Biquad> sections;
    // Concha resonance.
    sections.push_back(peaking({log_uniform(rng, 2500.0, 5500.0), uniform(rng, 6.0, 15.0),
                                uniform(rng, 1.0, 3.0)}, fs));
    // Pinna notches.
    const int notches = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < notches; ++k) {
      sections.push_back(peaking({log_uniform(rng, 6000.0, std::min(14000.0, 0.4 * fs)),
                                  uniform(rng, -25.0, -8.0), uniform(rng, 3.0, 10.0)}, fs));
    }
    // Head shadow.
    sections.push_back(high_shelf({log_uniform(rng, 1000.0, 4000.0), uniform(rng, -15.0, 0.0),
                                   0.707}, fs));
    // Ear-canal roll-off near the top of the band.
    sections.push_back(rbj_pass(std::min(16000.0, 0.42 * fs), 0.707, fs, false));
    const int delay = static_cast<int>(rng() % 24);
    ImpulseResponse ir;
    ir.sample_rate_hz = fs;
    ir.samples = impulse_through(sections, uniform(rng, 0.3, 1.0), delay, 512);
    out.push_back(std::move(ir));
  }
  return out;
}

std::vector<ImpulseResponse> synthetic_cabinet_set(int count, std::uint64_t seed,
                                                   double sample_rate_hz) {
  check_count(count);
  const double fs = sample_rate_hz;
  std::vector<ImpulseResponse> out;
  for (int i = 0; i < count; ++i) {
    Rng rng = make_rng(seed, Stream::kGenerate, static_cast<std::uint64_t>(i), 0x63616221);
    std::vector<Biquad> sections;
    // Resonant low cut from the sealed or ported box.
    sections.push_back(rbj_pass(log_uniform(rng, 60.0, 140.0), uniform(rng, 0.9, 2.5), fs, true));
    // Presence peaks.
    for (int k = 0; k < 2; ++k) {
      sections.push_back(peaking({log_uniform(rng, 1500.0, 4500.0), uniform(rng, 3.0, 9.0),
                                  uniform(rng, 0.8, 2.5)}, fs));
    }
    // Steep high roll-off: three cascaded low-pass stages.
    const double corner = log_uniform(rng, 4000.0, std::min(7000.0, 0.3 * fs));
    for (int k = 0; k < 3; ++k) sections.push_back(rbj_pass(corner, 0.6 + 0.3 * k, fs, false));
    // Cone break-up notches.
    const int notches = 1 + static_cast<int>(rng() % 2);
    for (int k = 0; k < notches; ++k) {
      sections.push_back(peaking({log_uniform(rng, 2000.0, 6000.0), uniform(rng, -15.0, -5.0),
                                  uniform(rng, 4.0, 8.0)}, fs));
    }
    ImpulseResponse ir;
    ir.sample_rate_hz = fs;
    ir.samples = impulse_through(sections, uniform(rng, 0.2, 0.8), static_cast<int>(rng() % 8),
                                 2048);
    out.push_back(std::move(ir));
  }
  return out;
}

}  // namespace iirfit
