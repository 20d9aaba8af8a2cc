// Copyright 2026 The cfmea Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cfmea/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cfmea/error.hpp"

namespace cfmea {

namespace {

constexpr double kWidth = 680.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 510.0;   // legend lives to the right of this
constexpr double kTop = 50.0;
constexpr double kBottom = 370.0;

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void expand(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (hi <= lo) {
      hi = lo + 1.0;
      lo -= 1.0;
    } else {
      const double margin = 0.05 * (hi - lo);
      lo -= margin;
      hi += margin;
    }
  }
  double scale(double v, double out_lo, double out_hi) const {
    return out_lo + (v - lo) / (hi - lo) * (out_hi - out_lo);
  }
};

void open_svg(std::ostringstream& out, const std::string& title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream& out, const std::string& x_label, const std::string& y_label) {
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << escape(x_label) << "</text>\n"
      << "<text x=\"16\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << (kTop + kBottom) / 2 << ")\">" << escape(y_label)
      << "</text>\n";
}

void draw_y_ticks(std::ostringstream& out, const Range& range) {
  for (int i = 0; i <= 5; ++i) {
    const double v = range.lo + (range.hi - range.lo) * i / 5.0;
    const double y = range.scale(v, kBottom, kTop);
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << y << "\" x2=\"" << kRight << "\" y2=\""
        << y << "\" stroke=\"#dddddd\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }
}

void draw_legend(std::ostringstream& out, const std::vector<std::string>& names) {
  double y = kTop + 10.0;
  for (std::size_t s = 0; s < names.size(); ++s) {
    const char* color = kPalette[s % kPaletteSize];
    out << "<rect x=\"" << kRight + 14 << "\" y=\"" << y - 9 << "\" width=\"12\" height=\"12\" "
        << "fill=\"" << color << "\"/>\n"
        << "<text x=\"" << kRight + 30 << "\" y=\"" << y + 2
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(names[s]) << "</text>\n";
    y += 18.0;
  }
}

}  // namespace

std::string render_line_chart(const LineChart& chart) {
  if (chart.series.empty()) throw ValueError("render_line_chart: no series");
  Range xr, yr;
  bool first = true;
  for (const Series& s : chart.series) {
    if (s.x.size() != s.y.size()) throw ShapeError("render_line_chart: x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (first) {
        xr.lo = xr.hi = s.x[i];
        yr.lo = yr.hi = s.y[i];
        first = false;
      }
      xr.expand(s.x[i]);
      yr.expand(s.y[i]);
    }
  }
  xr.pad();
  yr.pad();

  std::ostringstream out;
  open_svg(out, chart.title);
  draw_y_ticks(out, yr);
  draw_axes(out, chart.x_label, chart.y_label);
  for (int i = 0; i <= 5; ++i) {
    const double v = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double x = xr.scale(v, kLeft, kRight);
    out << "<text x=\"" << x << "\" y=\"" << kBottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(v)
        << "</text>\n";
  }
  std::vector<std::string> names;
  for (std::size_t s = 0; s < chart.series.size(); ++s) {
    const Series& series = chart.series[s];
    const char* color = kPalette[s % kPaletteSize];
    names.push_back(series.name);
    if (series.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < series.x.size(); ++i) {
        out << xr.scale(series.x[i], kLeft, kRight) << "," << yr.scale(series.y[i], kBottom, kTop)
            << " ";
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < series.x.size(); ++i) {
      out << "<circle cx=\"" << xr.scale(series.x[i], kLeft, kRight) << "\" cy=\""
          << yr.scale(series.y[i], kBottom, kTop) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
  }
  draw_legend(out, names);
  out << "</svg>\n";
  return out.str();
}

std::string render_bar_chart(const BarChart& chart) {
  if (chart.values.empty()) throw ValueError("render_bar_chart: no groups");
  if (chart.group_labels.size() != chart.values.size()) {
    throw ShapeError("render_bar_chart: group label count mismatch");
  }
  Range yr;
  yr.lo = 0.0;
  yr.hi = 0.0;
  for (const auto& group : chart.values) {
    if (group.size() != chart.series_names.size()) {
      throw ShapeError("render_bar_chart: group size differs from series count");
    }
    for (double v : group) yr.expand(v);
  }
  yr.pad();

  std::ostringstream out;
  open_svg(out, chart.title);
  draw_y_ticks(out, yr);
  draw_axes(out, "", chart.y_label);

  const std::size_t n_groups = chart.values.size();
  const std::size_t n_series = chart.series_names.size();
  const double group_width = (kRight - kLeft) / static_cast<double>(n_groups);
  const double bar_width = group_width * 0.8 / static_cast<double>(n_series);
  const double y0 = yr.scale(0.0, kBottom, kTop);
  for (std::size_t g = 0; g < n_groups; ++g) {
    const double group_x = kLeft + group_width * static_cast<double>(g) + group_width * 0.1;
    for (std::size_t s = 0; s < n_series; ++s) {
      const double v = chart.values[g][s];
      const double y = yr.scale(v, kBottom, kTop);
      const double top = std::min(y, y0);
      const double height = std::abs(y - y0);
      out << "<rect x=\"" << group_x + bar_width * static_cast<double>(s) << "\" y=\"" << top
          << "\" width=\"" << bar_width * 0.92 << "\" height=\"" << height << "\" fill=\""
          << kPalette[s % kPaletteSize] << "\"/>\n";
    }
    out << "<text x=\"" << group_x + group_width * 0.4 << "\" y=\"" << kBottom + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(chart.group_labels[g]) << "</text>\n";
  }
  draw_legend(out, chart.series_names);
  out << "</svg>\n";
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw ValueError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ValueError("write failed: " + path);
}

}  // namespace cfmea
