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

// The iirfit command-line tool as a library call, so tests can drive it
// in-process.

#ifndef IIRFIT_TOOLS_CLI_H_
#define IIRFIT_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace iirfit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitNumeric = 4;

// Parses argv (argv[0] is the program name) and runs one subcommand.
// Messages go to `out`; errors to `err` as "error: <kind>: <message>".
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace iirfit::cli

#endif  // IIRFIT_TOOLS_CLI_H_
