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

#ifndef IIRFIT_PARALLEL_H_
#define IIRFIT_PARALLEL_H_

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace iirfit {

// Calls fn(i) for i in [0, count) on up to `threads` workers using
// contiguous chunks. The first exception (lowest chunk) is rethrown.
template <typename Fn>
void parallel_for(std::int64_t count, int threads, Fn&& fn) {
  const std::int64_t workers = std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(count, 1));
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::int64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::int64_t begin = count * w / workers;
        const std::int64_t end = count * (w + 1) / workers;
        try {
          for (std::int64_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace iirfit

#endif  // IIRFIT_PARALLEL_H_
