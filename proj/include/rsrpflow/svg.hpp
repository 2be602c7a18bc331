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

// Standalone SVG line and step charts. Charts are built from the bundle CSVs
// alone, so they can be regenerated without rerunning anything.

#ifndef RSRPFLOW_SVG_HPP_
#define RSRPFLOW_SVG_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace rsrpflow {

struct ChartSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // sorted by x
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<ChartSeries> series;
  bool step = false;  // right-continuous steps, as for an ECDF
};

std::string render_svg(const Chart& chart);

// Writes correlation.svg, rmse_sweep.svg, shap_windows.svg, lookback.svg and
// ecdf_<area>.svg next to the CSVs found in dir. Returns the files written.
std::vector<std::filesystem::path> write_charts(const std::filesystem::path& dir);

}  // namespace rsrpflow

#endif  // RSRPFLOW_SVG_HPP_
