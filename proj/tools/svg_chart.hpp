// SPDX-FileCopyrightText: 2026 fr2la contributors
// SPDX-License-Identifier: MIT

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "fr2la/util.hpp"

namespace fr2la {

struct svg_series {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y)
};

namespace svgdetail {

inline std::string escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    if (c == '&') out += "&amp;";
    else if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else out += c;
  }
  return out;
}

// A "nice" tick step covering range/target_ticks: 1, 2 or 5 times a power of 10.
inline double nice_step(double range, int target_ticks) {
  if (!(range > 0.0)) return 1.0;
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (const double m : {1.0, 2.0, 5.0, 10.0})
    if (raw <= m * mag) return m * mag;
  return 10.0 * mag;
}

inline std::string fmt_tick(double v) {
  const double a = std::abs(v);
  const int digits = a >= 100.0 || a == 0.0 ? 0 : a >= 1.0 ? 1 : 3;
  return fmt_fixed(v, digits);
}

}  // namespace svgdetail

// Renders a dependency-free line chart: axes with ticks, one polyline per
// series, legend on the right. Output is a complete standalone SVG document.
inline std::string svg_line_chart(std::string_view title, std::string_view x_label,
                                  std::string_view y_label,
                                  const std::vector<svg_series>& series) {
  const double width = 880.0, height = 560.0;
  const double left = 80.0, right = width - 190.0, top = 50.0, bottom = height - 60.0;

  double x_min = 0.0, x_max = 1.0, y_max = 1.0;
  bool any = false;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!any) {
        x_min = x_max = x;
        y_max = y;
        any = true;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  const double y_min = 0.0;  // throughput-style charts anchor at zero
  if (y_max <= y_min) y_max = y_min + 1.0;
  y_max *= 1.05;

  const auto px = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (right - left);
  };
  const auto py = [&](double y) {
    return bottom - (y - y_min) / (y_max - y_min) * (bottom - top);
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                  "#9467bd", "#ff7f0e", "#8c564b"};

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_fixed(width, 0) +
         "\" height=\"" + fmt_fixed(height, 0) + "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + fmt_fixed((left + right) / 2, 1) +
         "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" +
         svgdetail::escape(title) + "</text>\n";

  // Gridlines and tick labels.
  const double x_step = svgdetail::nice_step(x_max - x_min, 8);
  const double y_step = svgdetail::nice_step(y_max - y_min, 8);
  for (double x = std::ceil(x_min / x_step) * x_step; x <= x_max + 1e-9; x += x_step) {
    out += "<line x1=\"" + fmt_fixed(px(x), 1) + "\" y1=\"" + fmt_fixed(top, 1) + "\" x2=\"" +
           fmt_fixed(px(x), 1) + "\" y2=\"" + fmt_fixed(bottom, 1) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + fmt_fixed(px(x), 1) + "\" y=\"" + fmt_fixed(bottom + 18, 1) +
           "\" text-anchor=\"middle\" font-size=\"12\">" + svgdetail::fmt_tick(x) +
           "</text>\n";
  }
  for (double y = y_min; y <= y_max + 1e-9; y += y_step) {
    out += "<line x1=\"" + fmt_fixed(left, 1) + "\" y1=\"" + fmt_fixed(py(y), 1) + "\" x2=\"" +
           fmt_fixed(right, 1) + "\" y2=\"" + fmt_fixed(py(y), 1) +
           "\" stroke=\"#dddddd\"/>\n";
    out += "<text x=\"" + fmt_fixed(left - 8, 1) + "\" y=\"" + fmt_fixed(py(y) + 4, 1) +
           "\" text-anchor=\"end\" font-size=\"12\">" + svgdetail::fmt_tick(y) + "</text>\n";
  }

  // Axes.
  out += "<line x1=\"" + fmt_fixed(left, 1) + "\" y1=\"" + fmt_fixed(bottom, 1) + "\" x2=\"" +
         fmt_fixed(right, 1) + "\" y2=\"" + fmt_fixed(bottom, 1) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt_fixed(left, 1) + "\" y1=\"" + fmt_fixed(top, 1) + "\" x2=\"" +
         fmt_fixed(left, 1) + "\" y2=\"" + fmt_fixed(bottom, 1) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt_fixed((left + right) / 2, 1) + "\" y=\"" +
         fmt_fixed(height - 16, 1) + "\" text-anchor=\"middle\" font-size=\"14\">" +
         svgdetail::escape(x_label) + "</text>\n";
  out += "<text x=\"20\" y=\"" + fmt_fixed((top + bottom) / 2, 1) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " +
         fmt_fixed((top + bottom) / 2, 1) + ")\">" + svgdetail::escape(y_label) +
         "</text>\n";

  // Series polylines and legend.
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % (sizeof palette / sizeof palette[0])];
    std::string pts;
    for (const auto& [x, y] : series[i].points) {
      if (!pts.empty()) pts += ' ';
      pts += fmt_fixed(px(x), 1) + "," + fmt_fixed(py(y), 1);
    }
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
    const double ly = top + 20.0 * static_cast<double>(i);
    out += "<line x1=\"" + fmt_fixed(right + 12, 1) + "\" y1=\"" + fmt_fixed(ly, 1) +
           "\" x2=\"" + fmt_fixed(right + 40, 1) + "\" y2=\"" + fmt_fixed(ly, 1) +
           "\" stroke=\"";
    out += color;
    out += "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + fmt_fixed(right + 46, 1) + "\" y=\"" + fmt_fixed(ly + 4, 1) +
           "\" font-size=\"12\">" + svgdetail::escape(series[i].name) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace fr2la
