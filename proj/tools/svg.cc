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

#include "svg.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace iirfit::cli {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Frame {
  double x0, x1, y0, y1;
  double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (kWidth - kLeft - kRight); }
  double py(double y) const { return kHeight - kBottom - (y - y0) / (y1 - y0) * (kHeight - kTop - kBottom); }
};

void header(std::ostringstream& s, const std::string& title) {
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << escape(title) << "</text>\n";
}

void legend(std::ostringstream& s, const std::vector<Series>& series) {
  for (size_t i = 0; i < series.size(); ++i) {
    const double y = kTop + 20 + 18 * i;
    s << "<rect x=\"" << kWidth - kRight + 15 << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" fill=\""
      << kColors[i % 6] << "\"/>\n<text x=\"" << kWidth - kRight + 32 << "\" y=\"" << y + 1 << "\">"
      << escape(series[i].name) << "</text>\n";
  }
}

void axes(std::ostringstream& s, const Frame& f, const std::vector<std::pair<double, std::string>>& xt,
          const std::vector<std::pair<double, std::string>>& yt, const std::string& xlabel,
          const std::string& ylabel) {
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kWidth - kLeft - kRight
    << "\" height=\"" << kHeight - kTop - kBottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (const auto& [v, label] : xt) {
    const double x = f.px(v);
    s << "<line x1=\"" << num(x) << "\" y1=\"" << kTop << "\" x2=\"" << num(x) << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"#ddd\"/>\n<text x=\"" << num(x) << "\" y=\""
      << kHeight - kBottom + 16 << "\" text-anchor=\"middle\">" << label << "</text>\n";
  }
  for (const auto& [v, label] : yt) {
    const double y = f.py(v);
    s << "<line x1=\"" << kLeft << "\" y1=\"" << num(y) << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << num(y) << "\" stroke=\"#ddd\"/>\n<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4)
      << "\" text-anchor=\"end\">" << label << "</text>\n";
  }
  s << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
    << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
    << "<text x=\"18\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (kTop + kHeight - kBottom) / 2 << ")\">" << ylabel << "</text>\n";
}

std::string tick_label(double v) {
  char buf[32];
  if (std::abs(v) >= 1000) std::snprintf(buf, sizeof(buf), "%gk", v / 1000);
  else std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

std::string line_chart_svg(const std::string& title, const std::vector<Series>& series) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = 0;
  double y0 = std::numeric_limits<double>::infinity(), y1 = -y0;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0) || !std::isfinite(s.y[i])) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) { x0 = 1; x1 = 10; }
  if (!(y1 > y0)) { y0 -= 1; y1 += 1; }
  const double pad = 0.05 * (y1 - y0);
  const Frame f{std::log10(x0), std::log10(x1), y0 - pad, y1 + pad};

  std::vector<std::pair<double, std::string>> xt, yt;
  for (double decade = std::pow(10.0, std::floor(f.x0)); decade <= x1; decade *= 10) {
    for (double m : {1.0, 2.0, 5.0}) {
      const double v = m * decade;
      if (v >= x0 && v <= x1) xt.push_back({std::log10(v), tick_label(v)});
    }
  }
  const double raw = (f.y1 - f.y0) / 8;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double step = raw / mag < 2 ? 2 * mag : raw / mag < 5 ? 5 * mag : 10 * mag;
  for (double v = std::ceil(f.y0 / step) * step; v <= f.y1; v += step) yt.push_back({v, tick_label(v)});

  std::ostringstream s;
  header(s, title);
  axes(s, f, xt, yt, "frequency (Hz)", "magnitude (dB)");
  for (size_t k = 0; k < series.size(); ++k) {
    s << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kColors[k % 6] << "\" points=\"";
    for (size_t i = 0; i < series[k].x.size(); ++i) {
      if (!(series[k].x[i] > 0) || !std::isfinite(series[k].y[i])) continue;
      s << num(f.px(std::log10(series[k].x[i]))) << ',' << num(f.py(series[k].y[i])) << ' ';
    }
    s << "\"/>\n";
  }
  legend(s, series);
  s << "</svg>\n";
  return s.str();
}

std::string scatter_svg(const std::string& title, const std::vector<Series>& series) {
  double r = 1.1;
  for (const auto& s : series) {
    for (size_t i = 0; i < s.x.size(); ++i) {
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) r = std::max({r, std::abs(s.x[i]) * 1.05, std::abs(s.y[i]) * 1.05});
    }
  }
  // Square plotting area.
  const double aspect = (kWidth - kLeft - kRight) / (kHeight - kTop - kBottom);
  const Frame f{-r * aspect, r * aspect, -r, r};
  std::vector<std::pair<double, std::string>> xt, yt;
  const double step = r > 2.5 ? 1.0 : 0.5;
  for (double v = -std::floor(r * aspect / step) * step; v <= r * aspect; v += step) xt.push_back({v, tick_label(v)});
  for (double v = -std::floor(r / step) * step; v <= r; v += step) yt.push_back({v, tick_label(v)});

  std::ostringstream s;
  header(s, title);
  axes(s, f, xt, yt, "real", "imaginary");
  s << "<ellipse cx=\"" << num(f.px(0)) << "\" cy=\"" << num(f.py(0)) << "\" rx=\"" << num(f.px(1) - f.px(0))
    << "\" ry=\"" << num(f.py(0) - f.py(1)) << "\" fill=\"none\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  for (size_t k = 0; k < series.size(); ++k) {
    for (size_t i = 0; i < series[k].x.size(); ++i) {
      if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i])) continue;
      s << "<circle cx=\"" << num(f.px(series[k].x[i])) << "\" cy=\"" << num(f.py(series[k].y[i]))
        << "\" r=\"2\" fill=\"" << kColors[k % 6] << "\" fill-opacity=\"0.6\"/>\n";
    }
  }
  legend(s, series);
  s << "</svg>\n";
  return s.str();
}

}  // namespace iirfit::cli
