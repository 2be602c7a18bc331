/*
 * Copyright 2026 The rsrpflow Authors.
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

#include "rsrpflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "rsrpflow/core_data.hpp"
#include "rsrpflow/report.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 400;
constexpr double kLeft = 70;
constexpr double kRight = 140;
constexpr double kTop = 40;
constexpr double kBottom = 50;

const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Series per area from the "mean" rows of a long-format table.
std::vector<ChartSeries> mean_series(const CsvTable& t, const std::string& x_col,
                                     const std::string& y_col) {
  const auto a = t.column("area");
  const auto d = t.column("day");
  const auto x = t.column(x_col);
  const auto y = t.column(y_col);
  std::map<std::string, ChartSeries> by_area;
  std::vector<std::string> order;
  for (const auto& row : t.rows) {
    if (row[d] != kMeanDay) continue;
    const auto xv = parse_double(row[x]);
    const auto yv = parse_double(row[y]);
    if (!xv || !yv) continue;
    if (!by_area.count(row[a])) order.push_back(row[a]);
    auto& s = by_area[row[a]];
    s.name = row[a];
    s.points.emplace_back(*xv, *yv);
  }
  std::vector<ChartSeries> out;
  for (const auto& name : order) {
    auto s = by_area[name];
    std::sort(s.points.begin(), s.points.end());
    out.push_back(std::move(s));
  }
  return out;
}

ChartSeries ecdf_series(const CsvTable& t, const std::string& name) {
  const auto d = t.column("day");
  const auto x = t.column("threshold");
  const auto y = t.column("fraction");
  ChartSeries s;
  s.name = name;
  for (const auto& row : t.rows) {
    if (row[d] != "all") continue;
    const auto xv = parse_double(row[x]);
    const auto yv = parse_double(row[y]);
    if (xv && yv) s.points.emplace_back(*xv, *yv);
  }
  return s;
}

}  // namespace

std::string render_svg(const Chart& chart) {
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : chart.series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (chart.step) {
    x0 = std::min(x0, 0.0);
    y0 = 0.0;
    y1 = std::max(y1, 1.0);
  }
  if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const double pad = 0.05 * (y1 - y0);
  y1 += pad;
  if (!chart.step) y0 -= pad;

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(chart.title) + "</text>\n";
  o += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x0 + (x1 - x0) * i / 5.0;
    const double yv = y0 + (y1 - y0) * i / 5.0;
    o += "<line x1=\"" + num(px(xv)) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px(xv)) +
         "\" y2=\"" + num(kTop + ph + 5) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + num(px(xv)) + "\" y=\"" + num(kTop + ph + 18) +
         "\" text-anchor=\"middle\">" + tick(xv) + "</text>\n";
    o += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py(yv)) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(py(yv)) + "\" stroke=\"black\"/>\n";
    o += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py(yv) + 4) +
         "\" text-anchor=\"end\">" + tick(yv) + "</text>\n";
  }
  o += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(kHeight - 10) +
       "\" text-anchor=\"middle\">" + escape(chart.x_label) + "</text>\n";
  o += "<text transform=\"translate(16," + num(kTop + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(chart.y_label) + "</text>\n";

  for (std::size_t i = 0; i < chart.series.size(); ++i) {
    const auto& s = chart.series[i];
    const char* color = kColors[i % (sizeof kColors / sizeof kColors[0])];
    std::string pts;
    double prev_y = 0.0;
    for (std::size_t j = 0; j < s.points.size(); ++j) {
      const auto [x, y] = s.points[j];
      if (chart.step) {
        if (j == 0) pts += num(px(std::min(x0, x))) + "," + num(py(0.0)) + " ";
        pts += num(px(x)) + "," + num(py(prev_y)) + " ";
        prev_y = y;
      }
      pts += num(px(x)) + "," + num(py(y)) + " ";
    }
    if (chart.step && !s.points.empty()) pts += num(px(x1)) + "," + num(py(prev_y));
    o += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.8\" points=\"" + pts + "\"/>\n";
    if (!chart.step) {
      for (const auto& [x, y] : s.points) {
        o += "<circle cx=\"" + num(px(x)) + "\" cy=\"" + num(py(y)) + "\" r=\"2.5\" fill=\"" +
             color + "\"/>\n";
      }
    }
    const double ly = kTop + 14 + 18 * static_cast<double>(i);
    o += "<line x1=\"" + num(kWidth - kRight + 12) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
         num(kWidth - kRight + 32) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + num(kWidth - kRight + 38) + "\" y=\"" + num(ly) + "\">" +
         escape(s.name) + "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

std::vector<std::filesystem::path> write_charts(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const Chart& chart) {
    const auto p = dir / name;
    write_file(p, render_svg(chart));
    written.push_back(p);
  };
  struct Sweep {
    const char* file;
    const char* column;
    const char* title;
    const char* y_label;
  };
  const Sweep sweeps[] = {
      {"correlation", "rho", "Spearman correlation vs variance window", "mean rho"},
      {"rmse_sweep", "rmse", "Test RMSE vs variance window", "mean RMSE (persons)"},
      {"shap_windows", "mean_abs_shap", "Joint-model attribution per window",
       "mean |SHAP|"},
  };
  for (const auto& s : sweeps) {
    const auto p = dir / (std::string(s.file) + ".csv");
    if (!std::filesystem::exists(p)) continue;
    Chart c;
    c.title = s.title;
    c.x_label = "dt (s)";
    c.y_label = s.y_label;
    c.series = mean_series(read_csv_table(p), "dt", s.column);
    emit(std::string(s.file) + ".svg", c);
  }
  if (const auto p = dir / "lookback.csv"; std::filesystem::exists(p)) {
    Chart c;
    c.title = "Attribution per look-back interval";
    c.x_label = "look-back interval k";
    c.y_label = "mean |SHAP|";
    c.series = mean_series(read_csv_table(p), "lookback", "mean_abs_shap");
    emit("lookback.svg", c);
  }
  for (AreaId a : kAllAreas) {
    const std::string n(to_string(a));
    const auto pin = dir / ("ecdf_" + n + "_inclass.csv");
    const auto pno = dir / ("ecdf_" + n + "_noclass.csv");
    if (!std::filesystem::exists(pin) || !std::filesystem::exists(pno)) continue;
    Chart c;
    c.title = "Absolute error ECDF, " + n + " area";
    c.x_label = "absolute error (persons)";
    c.y_label = "cumulative fraction";
    c.step = true;
    c.series.push_back(ecdf_series(read_csv_table(pin), "in-class"));
    c.series.push_back(ecdf_series(read_csv_table(pno), "no-class"));
    emit("ecdf_" + n + ".svg", c);
  }
  return written;
}

}  // namespace rsrpflow
