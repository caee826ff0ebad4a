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

// Usage: acceptance [--criterion N ...] [--list] [--scratch DIR] [--threads T]
//
// Runs the selected acceptance criteria (all by default) and prints one
// PASS/FAIL line per criterion. Exit status is 0 only if every selected
// criterion passed.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.h"

namespace fs = std::filesystem;
using iirfit::acceptance::Context;
using iirfit::acceptance::Criterion;
using iirfit::acceptance::Outcome;

int main(int argc, char** argv) {
  CLI::App app{"iirfit acceptance criteria"};
  std::vector<int> selected;
  bool list = false;
  std::string scratch;
  Context ctx;
  app.add_option("-c,--criterion", selected, "criterion ids to run (default: all)")
      ->check(CLI::Range(1, 13));
  app.add_flag("--list", list, "list the criteria and exit");
  app.add_option("--scratch", scratch, "directory for temporary files");
  app.add_option("--threads", ctx.threads, "worker threads for training and evaluation")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::vector<Criterion> all = iirfit::acceptance::numeric_criteria();
  for (auto& c : iirfit::acceptance::system_criteria()) all.push_back(std::move(c));
  if (list) {
    for (const auto& c : all) std::printf("%2d  %s\n", c.id, c.name.c_str());
    return 0;
  }

  ctx.scratch = scratch.empty() ? fs::temp_directory_path() /
                                      ("iirfit-acceptance-" + std::to_string(::getpid()))
                                : fs::path(scratch);
  fs::create_directories(ctx.scratch);

  int failed = 0, ran = 0;
  for (const auto& c : all) {
    if (!selected.empty() &&
        std::find(selected.begin(), selected.end(), c.id) == selected.end()) {
      continue;
    }
    ++ran;
    std::cout << "criterion " << c.id << ": " << c.name << "\n" << std::flush;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run(ctx);
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs > c.budget_s) {
      out.pass = false;
      out.detail += "; runtime " + iirfit::acceptance::num(secs) + " s over the " +
                    iirfit::acceptance::num(c.budget_s) + " s budget";
    }
    failed += !out.pass;
    std::printf("[%s] %2d %s (%.1f s): %s\n", out.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                secs, out.detail.c_str());
    std::fflush(stdout);
  }
  if (scratch.empty()) fs::remove_all(ctx.scratch);
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
