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
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "iirfit/errors.h"
#include "iirfit/filter_io.h"
#include "iirfit/ingest.h"

namespace iirfit {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint32_t le32(std::span<const std::uint8_t> b, size_t at) {
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t le16(std::span<const std::uint8_t> b, size_t at) {
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

[[noreturn]] void fail(const std::string& what, size_t offset) {
  throw DataError("WAV: " + what + " at byte offset " + std::to_string(offset));
}

struct Format {
  std::uint16_t tag = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t block_align = 0;
  std::uint16_t bits = 0;
};

double decode_sample(const std::uint8_t* p, const Format& f) {
  if (f.tag == kFormatFloat) {
    float x;
    const std::uint32_t u = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                            static_cast<std::uint32_t>(p[2]) << 16 |
                            static_cast<std::uint32_t>(p[3]) << 24;
    std::memcpy(&x, &u, 4);
    return x;
  }
  switch (f.bits) {
    case 16:
      return static_cast<std::int16_t>(p[0] | p[1] << 8) / 32768.0;
    case 24: {
      std::int32_t v = p[0] | p[1] << 8 | p[2] << 16;
      if (v & 0x800000) v -= 0x1000000;
      return v / 8388608.0;
    }
    default: {
      const std::uint32_t u = static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
                              static_cast<std::uint32_t>(p[2]) << 16 |
                              static_cast<std::uint32_t>(p[3]) << 24;
      return static_cast<std::int32_t>(u) / 2147483648.0;
    }
  }
}

}  // namespace

std::vector<ImpulseResponse> parse_wav(std::span<const std::uint8_t> b) {
  if (b.size() < 12) fail("file too short for a RIFF header", b.size());
  if (std::memcmp(b.data(), "RIFF", 4) != 0) fail("missing RIFF tag", 0);
  if (std::memcmp(b.data() + 8, "WAVE", 4) != 0) fail("missing WAVE tag", 8);

  Format fmt;
  bool have_fmt = false;
  size_t data_at = 0, data_size = 0;
  bool have_data = false;
  size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::string id(reinterpret_cast<const char*>(b.data() + at), 4);
    const size_t size = le32(b, at + 4);
    const size_t body = at + 8;
    if (size > b.size() - body) fail("chunk '" + id + "' is truncated", at);
    if (id == "fmt ") {
      if (size < 16) fail("fmt chunk too small", at);
      fmt.tag = le16(b, body);
      fmt.channels = le16(b, body + 2);
      fmt.rate = le32(b, body + 4);
      fmt.block_align = le16(b, body + 12);
      fmt.bits = le16(b, body + 14);
      if (fmt.tag == kFormatExtensible) {
        if (size < 40) fail("extensible fmt chunk too small", at);
        fmt.tag = le16(b, body + 24);  // first two bytes of the subformat GUID
      }
      have_fmt = true;
    } else if (id == "data") {
      data_at = body;
      data_size = size;
      have_data = true;
    }
    at = body + size + (size & 1);
  }
  if (!have_fmt) fail("no fmt chunk", at);
  if (!have_data) fail("no data chunk", at);

  const bool pcm = fmt.tag == kFormatPcm && (fmt.bits == 16 || fmt.bits == 24 || fmt.bits == 32);
  const bool flt = fmt.tag == kFormatFloat && fmt.bits == 32;
  if (!pcm && !flt) {
    throw DataError("WAV: unsupported encoding (format tag " + std::to_string(fmt.tag) + ", " +
                    std::to_string(fmt.bits) + " bits)");
  }
  if (fmt.channels == 0) throw DataError("WAV: zero channels");
  if (fmt.rate == 0) throw DataError("WAV: zero sample rate");
  const size_t bytes_per = fmt.bits / 8;
  if (fmt.block_align != bytes_per * fmt.channels) {
    throw DataError("WAV: block align " + std::to_string(fmt.block_align) +
                    " does not match channels and bit depth");
  }
  const size_t frames = data_size / fmt.block_align;
  if (frames == 0) fail("data chunk is empty", data_at);

  std::vector<ImpulseResponse> out(fmt.channels);
  for (int c = 0; c < fmt.channels; ++c) {
    out[c].sample_rate_hz = fmt.rate;
    out[c].channel_index = c;
    out[c].samples.resize(frames);
  }
  for (size_t i = 0; i < frames; ++i) {
    for (int c = 0; c < fmt.channels; ++c) {
      const size_t off = data_at + i * fmt.block_align + c * bytes_per;
      const double v = decode_sample(b.data() + off, fmt);
      if (!std::isfinite(v)) fail("non-finite float sample", off);
      out[c].samples[i] = v;
    }
  }
  return out;
}

std::vector<ImpulseResponse> read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  try {
    return parse_wav(bytes);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(std::span<const ImpulseResponse> channels,
                                     WavEncoding encoding) {
  if (channels.empty()) throw InvalidArgument("WAV needs at least one channel");
  const size_t frames = channels[0].samples.size();
  const double rate = channels[0].sample_rate_hz;
  for (const auto& ch : channels) {
    if (ch.samples.size() != frames || ch.sample_rate_hz != rate) {
      throw InvalidArgument("WAV channels must share length and sample rate");
    }
  }
  const int bits = encoding == WavEncoding::kPcm16 ? 16 : encoding == WavEncoding::kPcm24 ? 24 : 32;
  const size_t bytes_per = bits / 8;
  const size_t block = bytes_per * channels.size();
  const size_t data = block * frames;
  std::vector<std::uint8_t> out;
  out.reserve(44 + data);
  auto put = [&](std::uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  };
  auto tag = [&](const char* s) { out.insert(out.end(), s, s + 4); };
  tag("RIFF");
  put(36 + data, 4);
  tag("WAVE");
  tag("fmt ");
  put(16, 4);
  put(encoding == WavEncoding::kFloat32 ? kFormatFloat : kFormatPcm, 2);
  put(channels.size(), 2);
  put(static_cast<std::uint32_t>(std::lround(rate)), 4);
  put(static_cast<std::uint32_t>(std::lround(rate)) * block, 4);
  put(block, 2);
  put(bits, 2);
  tag("data");
  put(data, 4);
  for (size_t i = 0; i < frames; ++i) {
    for (const auto& ch : channels) {
      const double x = ch.samples[i];
      if (encoding == WavEncoding::kFloat32) {
        const float f = static_cast<float>(x);
        std::uint32_t u;
        std::memcpy(&u, &f, 4);
        put(u, 4);
      } else {
        const double scale = std::ldexp(1.0, bits - 1);
        const double q = std::clamp(std::round(x * scale), -scale, scale - 1.0);
        put(static_cast<std::uint64_t>(static_cast<std::int64_t>(q)), static_cast<int>(bytes_per));
      }
    }
  }
  return out;
}

void write_wav(const std::filesystem::path& path, std::span<const ImpulseResponse> channels,
               WavEncoding encoding) {
  const auto bytes = encode_wav(channels, encoding);
  write_text_file(path, std::string(bytes.begin(), bytes.end()));
}

}  // namespace iirfit
