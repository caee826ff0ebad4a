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

// Measured impulse responses to smoothed magnitude targets:
// WAV reading, rational-ratio resampling, FFT magnitude on a grid and
// Savitzky-Golay smoothing in the dB domain. Also builds synthetic
// HRTF-like and cabinet-like IR sets for when no measured data is at hand.

#ifndef IIRFIT_INGEST_H_
#define IIRFIT_INGEST_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iirfit/dsp.h"

namespace iirfit {

struct ImpulseResponse {
  std::vector<double> samples;
  double sample_rate_hz = 44100.0;
  int channel_index = 0;
};

enum class WavEncoding { kPcm16, kPcm24, kPcm32, kFloat32 };

// One ImpulseResponse per channel, samples scaled to [-1, 1] (integer PCM
// divides by 2^(bits-1)). Throws DataError on malformed or truncated input,
// unsupported codecs and empty data; messages name the byte offset.
std::vector<ImpulseResponse> parse_wav(std::span<const std::uint8_t> bytes);
std::vector<ImpulseResponse> read_wav(const std::filesystem::path& path);

// All channels must share length and sample rate. Integer encodings clip
// to the representable range.
std::vector<std::uint8_t> encode_wav(std::span<const ImpulseResponse> channels,
                                     WavEncoding encoding);
void write_wav(const std::filesystem::path& path,
               std::span<const ImpulseResponse> channels, WavEncoding encoding);

// Smallest up/down pair with |up/down - to/from| <= 1e-6 * to/from.
std::pair<std::int64_t, std::int64_t> rational_ratio(double from_hz, double to_hz);

// Polyphase Kaiser-windowed-sinc resampling with >= 80 dB stopband starting
// at the lower of the two Nyquist frequencies. Returns the input unchanged
// when the rates match. Throws InvalidArgument on a non-positive rate.
ImpulseResponse resample(const ImpulseResponse& ir, double to_hz);

// Magnitude of the zero-padded FFT (next power of two >= 4x length) in dB,
// floored at -128 dB, linearly interpolated in dB onto the grid frequencies.
// Throws InvalidArgument for fewer than 2 samples, an all-zero IR or a grid
// extending past the IR's Nyquist frequency.
MagnitudeResponse ir_to_magnitude(const ImpulseResponse& ir, const FrequencyGrid& grid);

struct SmoothingConfig {
  int window_length = 63;
  int poly_order = 3;
  void validate() const;  // throws InvalidArgument
};

// Weights w such that sum_i w[i] x[i] is the least-squares degree-`order`
// fit over `window` samples evaluated at sample `position` (0-based within
// the window).
std::vector<double> savgol_weights(int window, int order, int position);

// Centered fits in the interior; the first and last window/2 points use the
// one-sided fit over the first or last full window. window_length must not
// exceed the response length.
MagnitudeResponse savgol_smooth(const MagnitudeResponse& x, const SmoothingConfig& config);

// resample (if needed) -> ir_to_magnitude -> savgol_smooth. A resampled IR
// is scaled by from/to so its magnitude response carries over unchanged.
MagnitudeResponse ir_to_target(const ImpulseResponse& ir, const FrequencyGrid& grid,
                               const SmoothingConfig& smoothing);

// Deterministic stand-ins built from known filters. HRTF-like: concha
// resonance, pinna notches, head-shadow shelf, short delay; cabinet-like:
// resonant low cut, presence peaks, steep high roll-off, cone break-up
// notches.
std::vector<ImpulseResponse> synthetic_hrtf_set(int count, std::uint64_t seed,
                                                double sample_rate_hz = 44100.0);
std::vector<ImpulseResponse> synthetic_cabinet_set(int count, std::uint64_t seed,
                                                   double sample_rate_hz = 44100.0);

}  // namespace iirfit

#endif  // IIRFIT_INGEST_H_
