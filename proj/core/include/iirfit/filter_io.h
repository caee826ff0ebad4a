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
// File formats shared by the library and the command-line tool.
//
//  * MagnitudeResponse: CSV with header "freq_hz,mag_db", one row per grid
//    point, frequencies ascending from 0 to fs/2.
//  * CoefficientFilter: JSON {"order": N, "gain": g, "sections":
//    [[b0,b1,b2,a0,a1,a2], ...]} with every section normalized to a0 = 1.
//  * FilterCascade: JSON {"gain": g, "poles": [[re,im], ...],
//    "zeros": [[re,im], ...]}.

#ifndef IIRFIT_FILTER_IO_H_
#define IIRFIT_FILTER_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "iirfit/dsp.h"

namespace iirfit {

void write_response_csv(std::ostream& out, const MagnitudeResponse& response);
void write_response_csv(const std::filesystem::path& path,
                        const MagnitudeResponse& response);

// Infers the grid from the row count and the last frequency (fs / 2).
// Throws DataError on a malformed file or non-uniform frequency spacing.
MagnitudeResponse read_response_csv(std::istream& in);
MagnitudeResponse read_response_csv(const std::filesystem::path& path);

// Factors an expanded filter into second-order sections using polynomial
// roots. Filters that already carry sections are returned unchanged.
CoefficientFilter with_sections(const CoefficientFilter& filter);

nlohmann::json filter_to_json(const CoefficientFilter& filter);
CoefficientFilter filter_from_json(const nlohmann::json& j);

nlohmann::json cascade_to_json(const FilterCascade& cascade);
FilterCascade cascade_from_json(const nlohmann::json& j);

// Shortest-safe round-trip text form ("%.17g").
std::string format_double(double v);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace iirfit

#endif  // IIRFIT_FILTER_IO_H_
