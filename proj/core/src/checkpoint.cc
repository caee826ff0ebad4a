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

#include "iirfit/checkpoint.h"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include <zlib.h>

#include "iirfit/errors.h"

namespace iirfit {

namespace {

constexpr char kMagic[4] = {'I', 'I', 'R', 'N'};
constexpr size_t kHeaderBytes = 4 + 4 * 4 + 8 * 3;

class Writer {
 public:
  void u32(std::uint32_t x) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  void u64(std::uint64_t x) {
    for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
  }
  void f32(float x) { u32(std::bit_cast<std::uint32_t>(x)); }
  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : bytes_(b) {}
  std::uint32_t u32() {
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(bytes_[at_++]) << (8 * i);
    return x;
  }
  std::uint64_t u64() {
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(bytes_[at_++]) << (8 * i);
    return x;
  }
  float f32() { return std::bit_cast<float>(u32()); }

 private:
  std::span<const std::uint8_t> bytes_;
  size_t at_ = 0;
};

std::uint32_t crc_of(std::span<const std::uint8_t> b) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  size_t at = 0;
  while (at < b.size()) {
    const uInt n = static_cast<uInt>(std::min<size_t>(b.size() - at, 1u << 30));
    crc = crc32(crc, b.data() + at, n);
    at += n;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& ck) {
  const MlpShape& s = ck.model.shape();
  const auto params = ck.model.params();
  const size_t p = params.size();
  if (ck.optimizer.m.size() != p || ck.optimizer.v.size() != p) {
    throw InvalidArgument("optimizer state does not match the model");
  }
  Writer w;
  w.bytes.reserve(kHeaderBytes + 12 * p + 4);
  w.bytes.insert(w.bytes.end(), std::begin(kMagic), std::end(kMagic));
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(s.input_dim));
  w.u32(static_cast<std::uint32_t>(s.hidden_dim));
  w.u32(static_cast<std::uint32_t>(s.order));
  w.u64(p);
  w.u64(ck.seed);
  w.u64(static_cast<std::uint64_t>(ck.optimizer.step));
  for (float x : params) w.f32(x);
  for (float x : ck.optimizer.m) w.f32(x);
  for (float x : ck.optimizer.v) w.f32(x);
  w.u32(crc_of(w.bytes));
  return std::move(w.bytes);
}

Checkpoint parse_checkpoint(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes + 4) throw DataError("checkpoint is truncated");
  if (!std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
    throw DataError("not a checkpoint file (bad magic)");
  }
  Reader r(bytes.subspan(4));
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint version " + std::to_string(version) + " is not supported (expected " +
                    std::to_string(kCheckpointVersion) + ")");
  }
  MlpShape shape;
  shape.input_dim = static_cast<int>(r.u32());
  shape.hidden_dim = static_cast<int>(r.u32());
  shape.order = static_cast<int>(r.u32());
  const std::uint64_t p = r.u64();
  const std::uint64_t seed = r.u64();
  const std::uint64_t step = r.u64();
  if (p > (bytes.size() - kHeaderBytes - 4) / 12 || bytes.size() != kHeaderBytes + 12 * p + 4) {
    throw DataError("checkpoint is truncated or has trailing bytes");
  }
  const auto payload = bytes.first(bytes.size() - 4);
  Reader tail(bytes.last(4));
  if (tail.u32() != crc_of(payload)) throw DataError("checkpoint checksum mismatch");

  Checkpoint ck{[&] {
                  try {
                    return Mlp<float>(shape);
                  } catch (const InvalidArgument& e) {
                    throw DataError(std::string("checkpoint has an invalid shape: ") + e.what());
                  }
                }(),
                {},
                seed};
  if (static_cast<std::uint64_t>(ck.model.num_parameters()) != p) {
    throw DataError("checkpoint parameter count does not match its shape");
  }
  for (float& x : ck.model.params()) x = r.f32();
  ck.optimizer.m.resize(p);
  ck.optimizer.v.resize(p);
  for (float& x : ck.optimizer.m) x = r.f32();
  for (float& x : ck.optimizer.v) x = r.f32();
  ck.optimizer.step = static_cast<std::int64_t>(step);
  return ck;
}

void save_checkpoint(const std::string& path, const Checkpoint& checkpoint) {
  const auto bytes = serialize_checkpoint(checkpoint);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write checkpoint " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
      std::remove(tmp.c_str());
      throw DataError("failed writing checkpoint " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw DataError("cannot move checkpoint into place: " + ec.message());
  }
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return parse_checkpoint(bytes);
}

}  // namespace iirfit
