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

// Minimal static SVG charts for the plot subcommand.

#ifndef IIRFIT_TOOLS_SVG_H_
#define IIRFIT_TOOLS_SVG_H_

#include <string>
#include <vector>

namespace iirfit::cli {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Lines on a log-frequency axis (x in Hz; x = 0 is dropped), y in dB.
std::string line_chart_svg(const std::string& title, const std::vector<Series>& series);

// Points in the complex plane with the unit circle drawn for reference.
std::string scatter_svg(const std::string& title, const std::vector<Series>& series);

}  // namespace iirfit::cli

#endif  // IIRFIT_TOOLS_SVG_H_
