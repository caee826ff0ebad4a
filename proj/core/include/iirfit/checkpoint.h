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

// Binary model checkpoints, little-endian:
//   "IIRN" | version u32 | F u32 | D u32 | N u32 | param count u64 |
//   seed u64 | step u64 | params f32[P] | adam m f32[P] | adam v f32[P] |
//   CRC-32 u32 of every preceding byte.

#ifndef IIRFIT_CHECKPOINT_H_
#define IIRFIT_CHECKPOINT_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iirfit/mlp.h"

namespace iirfit {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Mlp<float> model;
  AdamWState optimizer;
  std::uint64_t seed = 0;
};

std::vector<std::uint8_t> serialize_checkpoint(const Checkpoint& checkpoint);

// Throws DataError on bad magic, version mismatch, truncation or a checksum
// failure. Nothing is returned unless the whole file validates.
Checkpoint parse_checkpoint(std::span<const std::uint8_t> bytes);

// Writes to `path` via a temporary file and rename.
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace iirfit

#endif  // IIRFIT_CHECKPOINT_H_
