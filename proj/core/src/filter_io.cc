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

#include "iirfit/filter_io.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "iirfit/errors.h"
#include "iirfit/polyroots.h"

namespace iirfit {

using nlohmann::json;

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

void write_response_csv(std::ostream& out, const MagnitudeResponse& response) {
  out << "freq_hz,mag_db\n";
  for (int j = 0; j < response.grid.size(); ++j) {
    out << format_double(response.grid.hz(j)) << ','
        << format_double(response.values_db[j]) << '\n';
  }
}

void write_response_csv(const std::filesystem::path& path,
                        const MagnitudeResponse& response) {
  std::ostringstream ss;
  write_response_csv(ss, response);
  write_text_file(path, ss.str());
}

MagnitudeResponse read_response_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("response CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "freq_hz,mag_db") {
    throw DataError("response CSV header must be 'freq_hz,mag_db', got '" +
                    line + "'");
  }
  std::vector<double> freqs;
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw DataError("response CSV line " + std::to_string(line_no) +
                      ": expected two columns");
    }
    try {
      size_t used = 0;
      const std::string f = line.substr(0, comma);
      const std::string v = line.substr(comma + 1);
      freqs.push_back(std::stod(f, &used));
      if (used != f.size()) throw std::invalid_argument(f);
      values.push_back(std::stod(v, &used));
      if (used != v.size()) throw std::invalid_argument(v);
    } catch (const std::logic_error&) {
      throw DataError("response CSV line " + std::to_string(line_no) +
                      ": not a number");
    }
    if (!std::isfinite(values.back())) {
      throw DataError("response CSV line " + std::to_string(line_no) +
                      ": non-finite magnitude");
    }
  }
  if (freqs.size() < 2) throw DataError("response CSV needs at least 2 rows");
  const double nyquist = freqs.back();
  if (freqs.front() != 0.0 || !(nyquist > 0.0)) {
    throw DataError("response CSV frequencies must run from 0 to fs/2");
  }
  const double step = nyquist / static_cast<double>(freqs.size() - 1);
  for (size_t j = 0; j < freqs.size(); ++j) {
    if (std::abs(freqs[j] - step * static_cast<double>(j)) > 1e-6 * step) {
      throw DataError("response CSV frequencies are not linearly spaced (row " +
                      std::to_string(j + 2) + ")");
    }
  }
  FrequencyGrid grid(static_cast<int>(freqs.size()), 2.0 * nyquist);
  return MagnitudeResponse{std::move(grid), std::move(values)};
}

MagnitudeResponse read_response_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text_file(path));
  return read_response_csv(in);
}

namespace {

// Linear factors [c0, c1] (c0 + c1 u, u = z^-1) and conjugate root pairs.
struct Factors {
  double lead = 1.0;
  std::vector<std::array<double, 2>> linear;
  std::vector<std::complex<double>> pairs;
};

Factors factor(const std::vector<double>& coeffs) {
  Factors f;
  size_t m = 0;
  while (m < coeffs.size() && coeffs[m] == 0.0) ++m;
  if (m == coeffs.size()) {
    f.lead = 0.0;
    return f;
  }
  f.lead = coeffs[m];
  for (size_t i = 0; i < m; ++i) f.linear.push_back({0.0, 1.0});
  const std::span<const double> rest(coeffs.data() + m, coeffs.size() - m);
  auto roots = z_inverse_roots(rest);
  std::vector<double> reals;
  for (const auto& r : roots) {
    if (r.imag() == 0.0) {
      reals.push_back(r.real());
    } else if (r.imag() > 0.0) {
      f.pairs.push_back(r);
    }
  }
  std::sort(reals.begin(), reals.end());
  for (double r : reals) f.linear.push_back({1.0, -r});
  return f;
}

std::vector<std::array<double, 3>> to_quadratics(const Factors& f) {
  std::vector<std::array<double, 3>> out;
  for (const auto& q : f.pairs) {
    out.push_back({1.0, -2.0 * q.real(), std::norm(q)});
  }
  for (size_t i = 0; i < f.linear.size(); i += 2) {
    const auto& a = f.linear[i];
    if (i + 1 < f.linear.size()) {
      const auto& b = f.linear[i + 1];
      out.push_back({a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1]});
    } else {
      out.push_back({a[0], a[1], 0.0});
    }
  }
  return out;
}

}  // namespace

CoefficientFilter with_sections(const CoefficientFilter& filter) {
  if (!filter.sections.empty()) return filter;
  if (filter.denominator.empty() || filter.denominator[0] == 0.0) {
    throw InvalidArgument("with_sections: a0 must be nonzero");
  }
  const Factors num = factor(filter.numerator);
  const Factors den = factor(filter.denominator);
  auto nq = to_quadratics(num);
  auto dq = to_quadratics(den);
  const size_t k = std::max<size_t>({nq.size(), dq.size(), 1});
  nq.resize(k, {1.0, 0.0, 0.0});
  dq.resize(k, {1.0, 0.0, 0.0});
  std::vector<Biquad> sections(k);
  const double gain = num.lead / den.lead;
  for (size_t i = 0; i < k; ++i) {
    const double g = i == 0 ? gain : 1.0;
    sections[i] = Biquad{g * nq[i][0], g * nq[i][1], g * nq[i][2],
                         dq[i][0],     dq[i][1],     dq[i][2]};
  }
  CoefficientFilter out = filter;
  out.sections = std::move(sections);
  return out;
}

json filter_to_json(const CoefficientFilter& filter) {
  const CoefficientFilter factored = with_sections(filter);
  double gain = 1.0;
  json sections = json::array();
  for (Biquad s : factored.sections) {
    const double a0 = s.a0;
    s.b0 /= a0; s.b1 /= a0; s.b2 /= a0;
    s.a0 = 1.0; s.a1 /= a0; s.a2 /= a0;
    if (s.b0 != 0.0) {
      gain *= s.b0;
      s.b1 /= s.b0;
      s.b2 /= s.b0;
      s.b0 = 1.0;
    }
    sections.push_back({s.b0, s.b1, s.b2, s.a0, s.a1, s.a2});
  }
  return json{{"order", filter.order()}, {"gain", gain}, {"sections", sections}};
}

CoefficientFilter filter_from_json(const json& j) {
  try {
    const double gain = j.at("gain").get<double>();
    std::vector<Biquad> sections;
    for (const auto& row : j.at("sections")) {
      const auto c = row.get<std::vector<double>>();
      if (c.size() != 6) throw DataError("each section needs 6 coefficients");
      if (c[3] == 0.0) throw DataError("section a0 must be nonzero");
      sections.push_back(Biquad{c[0], c[1], c[2], c[3], c[4], c[5]});
    }
    if (sections.empty()) {
      CoefficientFilter f;
      f.numerator = {gain};
      f.denominator = {1.0};
      return f;
    }
    sections[0].b0 *= gain;
    sections[0].b1 *= gain;
    sections[0].b2 *= gain;
    auto f = CoefficientFilter::FromSections(std::move(sections));
    if (j.contains("order")) {
      // Declared order wins when sections were padded with identity stages.
      const size_t len = static_cast<size_t>(std::max(j.at("order").get<int>(), 0)) + 1;
      while (f.numerator.size() > len && f.numerator.back() == 0.0 &&
             f.denominator.back() == 0.0) {
        f.numerator.pop_back();
        f.denominator.pop_back();
      }
    }
    return f;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed filter JSON: ") + e.what());
  }
}

json cascade_to_json(const FilterCascade& cascade) {
  json poles = json::array();
  json zeros = json::array();
  for (const auto& p : cascade.poles) poles.push_back({p.real(), p.imag()});
  for (const auto& z : cascade.zeros) zeros.push_back({z.real(), z.imag()});
  return json{{"gain", cascade.gain}, {"poles", poles}, {"zeros", zeros}};
}

FilterCascade cascade_from_json(const json& j) {
  try {
    FilterCascade c;
    c.gain = j.at("gain").get<double>();
    for (const auto& p : j.at("poles")) {
      c.poles.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    for (const auto& z : j.at("zeros")) {
      c.zeros.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
    }
    if (c.poles.size() != c.zeros.size()) {
      throw DataError("cascade JSON needs equal numbers of poles and zeros");
    }
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed cascade JSON: ") + e.what());
  }
}

}  // namespace iirfit
