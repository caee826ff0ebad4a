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

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "iirfit/errors.h"
#include "iirfit/ingest.h"

namespace iirfit {

namespace {

// Design attenuation. A few dB over the 80 dB requirement absorbs the
// Kaiser length formula's optimism.
constexpr double kStopbandDb = 90.0;
// Passband edge as a fraction of the lower Nyquist frequency.
constexpr double kPassbandFraction = 0.9;
constexpr std::int64_t kMaxFilterLength = 1 << 24;

std::vector<double> kaiser_lowpass(std::int64_t up, std::int64_t down) {
  const double nyq = 0.5 / static_cast<double>(std::max(up, down));  // cycles/sample, upsampled rate
  const double width = (1.0 - kPassbandFraction) * nyq;
  const double cutoff = nyq - 0.5 * width;
  const double beta = 0.1102 * (kStopbandDb - 8.7);
  std::int64_t n = static_cast<std::int64_t>(
      std::ceil((kStopbandDb - 7.95) / (2.285 * 2.0 * std::numbers::pi * width))) + 1;
  n |= 1;  // odd, so the delay is a whole number of samples
  if (n > kMaxFilterLength) {
    throw InvalidArgument("resample: ratio " + std::to_string(up) + "/" + std::to_string(down) +
                          " needs a " + std::to_string(n) + "-tap filter");
  }
  std::vector<double> h(n);
  const double half = 0.5 * static_cast<double>(n - 1);
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  double sum = 0.0;
  for (std::int64_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) - half;
    const double x = 2.0 * cutoff * t;
    const double sinc = x == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double r = t / half;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[k] = 2.0 * cutoff * sinc * w;
    sum += h[k];
  }
  // Unity DC gain after zero-stuffing by `up`.
  for (double& v : h) v *= static_cast<double>(up) / sum;
  return h;
}

}  // namespace

std::pair<std::int64_t, std::int64_t> rational_ratio(double from_hz, double to_hz) {
  if (!(from_hz > 0.0) || !(to_hz > 0.0) || !std::isfinite(from_hz) || !std::isfinite(to_hz)) {
    throw InvalidArgument("resample: sample rates must be positive and finite");
  }
  if (from_hz == std::round(from_hz) && to_hz == std::round(to_hz) && from_hz < 1e15 &&
      to_hz < 1e15) {
    const auto a = static_cast<std::int64_t>(from_hz);
    const auto b = static_cast<std::int64_t>(to_hz);
    const std::int64_t g = std::gcd(a, b);
    return {b / g, a / g};
  }
  // Continued-fraction convergents of to/from.
  const double target = to_hz / from_hz;
  double x = target;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(x);
    const auto ai = static_cast<std::int64_t>(a);
    const std::int64_t p2 = ai * p1 + p0;
    const std::int64_t q2 = ai * q1 + q0;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    const double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(approx - target) <= 1e-6 * target) return {p1, q1};
    if (x == a) break;
    x = 1.0 / (x - a);
  }
  throw InvalidArgument("resample: no rational approximation of the rate ratio");
}

ImpulseResponse resample(const ImpulseResponse& ir, double to_hz) {
  if (!(to_hz > 0.0)) throw InvalidArgument("resample: target rate must be positive");
  if (ir.samples.empty()) throw InvalidArgument("resample: empty impulse response");
  if (to_hz == ir.sample_rate_hz) return ir;
  const auto [up, down] = rational_ratio(ir.sample_rate_hz, to_hz);
  const std::vector<double> h = kaiser_lowpass(up, down);
  const auto taps = static_cast<std::int64_t>(h.size());
  const std::int64_t delay = (taps - 1) / 2;
  const auto n_in = static_cast<std::int64_t>(ir.samples.size());
  const std::int64_t n_out = (n_in * up + down - 1) / down;

  ImpulseResponse out;
  out.sample_rate_hz = to_hz;
  out.channel_index = ir.channel_index;
  out.samples.resize(n_out);
  for (std::int64_t m = 0; m < n_out; ++m) {
    // Position in the zero-stuffed stream, shifted by the filter delay.
    const std::int64_t t = m * down + delay;
    std::int64_t first = t - (taps - 1);
    first = first <= 0 ? 0 : (first + up - 1) / up;
    const std::int64_t last = std::min(n_in - 1, t / up);
    long double acc = 0.0L;
    for (std::int64_t n = first; n <= last; ++n) acc += h[t - n * up] * ir.samples[n];
    out.samples[m] = static_cast<double>(acc);
  }
  return out;
}

}  // namespace iirfit
