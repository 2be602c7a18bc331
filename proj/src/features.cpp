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

#include "rsrpflow/features.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

constexpr double kGridTolerance = 1e-9;

int subwindow_count(double dt, double agg_len) {
  return static_cast<int>(std::floor(agg_len / dt + kGridTolerance));
}

void check_dt(double dt, double agg_len) {
  if (!(dt > 0.0) || dt > agg_len + kGridTolerance) {
    throw Error(ErrorKind::kInvalidArgument,
                "invalid variance window " + format_double(dt) + " s: must be in (0, agg_len]");
  }
}

// Mean of the sub-window variances; nullopt for a sub-window with < 2 samples.
std::optional<double> mean_subwindow_variance(const RsrpTrace& trace, double dt, double t0,
                                              double agg_len) {
  const auto times = trace.times();
  const auto values = trace.rsrp();
  const int m = subwindow_count(dt, agg_len);
  auto first = static_cast<std::size_t>(
      std::lower_bound(times.begin(), times.end(), t0 - kTimeEpsilon) - times.begin());
  double total = 0.0;
  for (int j = 0; j < m; ++j) {
    const double b = t0 + (j + 1) * dt;
    const auto last = static_cast<std::size_t>(
        std::lower_bound(times.begin() + static_cast<std::ptrdiff_t>(first), times.end(),
                         b - kTimeEpsilon) -
        times.begin());
    if (last - first < 2) return std::nullopt;
    total += window_variance(values.subspan(first, last - first));
    first = last;
  }
  return total / m;
}

}  // namespace

std::string_view to_string(LookbackAnchor anchor) {
  return anchor == LookbackAnchor::kCoincident ? "coincident" : "preceding";
}

LookbackAnchor parse_anchor(std::string_view text) {
  text = trim(text);
  if (text == "coincident") return LookbackAnchor::kCoincident;
  if (text == "preceding") return LookbackAnchor::kPreceding;
  throw Error(ErrorKind::kInvalidArgument, "unknown look-back anchor '" + std::string(text) + "'");
}

std::vector<double> default_dt_grid() { return {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0}; }

void FeatureSpec::validate() const {
  if (!(agg_len > 0.0) || !(shift > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "agg_len and shift must be positive");
  }
  if (dt_grid.empty()) throw Error(ErrorKind::kInvalidArgument, "dt_grid is empty");
  for (std::size_t i = 0; i < dt_grid.size(); ++i) {
    check_dt(dt_grid[i], agg_len);
    if (i > 0 && !(dt_grid[i] > dt_grid[i - 1])) {
      throw Error(ErrorKind::kInvalidArgument, "dt_grid must be strictly increasing");
    }
  }
  if (lookback_intervals < 1) {
    throw Error(ErrorKind::kInvalidArgument, "lookback_intervals must be >= 1");
  }
  if (!(min_coverage >= 0.0 && min_coverage <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "min_coverage must lie in [0, 1]");
  }
}

std::string feature_name(double dt, int lookback) {
  return "var_dt" + format_decimal(dt) + "_lb" + std::to_string(lookback);
}

bool FeatureRow::complete() const {
  return std::all_of(features.begin(), features.end(), [](const auto& v) { return v.has_value(); });
}

std::size_t FeatureTable::complete_rows() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const FeatureRow& r) { return r.complete(); }));
}

FeatureTable FeatureTable::complete_only() const {
  FeatureTable out;
  out.feature_names = feature_names;
  for (const auto& row : rows) {
    if (row.complete()) out.rows.push_back(row);
  }
  return out;
}

std::size_t FeatureTable::column(const std::string& name) const {
  const auto it = std::find(feature_names.begin(), feature_names.end(), name);
  if (it == feature_names.end()) {
    throw Error(ErrorKind::kInvalidArgument, "no feature column '" + name + "'");
  }
  return static_cast<std::size_t>(it - feature_names.begin());
}

double window_variance(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::kEmpty, "variance of an empty window");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(values.size());
}

std::optional<double> rsrp_var(const RsrpTrace& trace, double dt, double t0, double agg_len,
                               double min_coverage) {
  check_dt(dt, agg_len);
  if (window_coverage(trace, t0, t0 + agg_len) < min_coverage) return std::nullopt;
  return mean_subwindow_variance(trace, dt, t0, agg_len);
}

std::vector<std::size_t> subwindow_sample_counts(const RsrpTrace& trace, double dt, double t0,
                                                 double agg_len) {
  check_dt(dt, agg_len);
  std::vector<std::size_t> counts;
  const int m = subwindow_count(dt, agg_len);
  for (int j = 0; j < m; ++j) {
    const auto [first, last] = trace.index_range(t0 + j * dt, t0 + (j + 1) * dt);
    counts.push_back(last - first);
  }
  return counts;
}

std::vector<FeaturePoint> feature_series(const RsrpTrace& trace, double dt,
                                         const FeatureSpec& spec) {
  check_dt(dt, spec.agg_len);
  std::vector<FeaturePoint> out;
  if (trace.empty()) return out;
  const double end = trace.end_time();
  for (std::int64_t i = 0;; ++i) {
    const double t0 = static_cast<double>(i) * spec.shift;
    if (t0 + spec.agg_len > end + kTimeEpsilon) break;
    out.push_back({t0, rsrp_var(trace, dt, t0, spec.agg_len, spec.min_coverage)});
  }
  return out;
}

FeatureBank::FeatureBank(std::span<const RsrpTrace> traces, std::span<const double> dts,
                         const FeatureSpec& spec)
    : shift_(spec.shift), agg_len_(spec.agg_len), min_coverage_(spec.min_coverage) {
  for (const auto& trace : traces) {
    DaySeries& day = days_[trace.day_id()];
    day.trace = &trace;
    for (double dt : dts) {
      std::vector<std::optional<double>> values;
      for (const auto& p : feature_series(trace, dt, spec)) values.push_back(p.value);
      day.by_dt[dt] = std::move(values);
    }
  }
}

bool FeatureBank::has_day(const std::string& day_id) const { return days_.count(day_id) > 0; }

std::optional<double> FeatureBank::value(const std::string& day_id, double dt, double t0) const {
  const auto day_it = days_.find(day_id);
  if (day_it == days_.end()) {
    throw Error(ErrorKind::kMissingDay, "no trace for day '" + day_id + "'");
  }
  const DaySeries& day = day_it->second;
  if (t0 < -kTimeEpsilon) return std::nullopt;
  const auto dt_it = day.by_dt.lower_bound(dt - kGridTolerance);
  const double index = t0 / shift_;
  const double rounded = std::round(index);
  if (dt_it != day.by_dt.end() && std::abs(dt_it->first - dt) <= kGridTolerance &&
      std::abs(index - rounded) < 1e-6) {
    const auto& series = dt_it->second;
    const auto i = static_cast<std::size_t>(rounded);
    return i < series.size() ? series[i] : std::nullopt;
  }
  // Off-grid request: evaluate directly.
  if (t0 + agg_len_ > day.trace->end_time() + kTimeEpsilon) return std::nullopt;
  return rsrp_var(*day.trace, dt, t0, agg_len_, min_coverage_);
}

FeatureTable build_table(std::span<const RsrpTrace> traces, std::span<const CountSeries> counts,
                         const FeatureSpec& spec, const AreaSpec& area) {
  spec.validate();
  const FeatureBank bank(traces, spec.dt_grid, spec);
  return build_table(bank, counts, spec, area);
}

FeatureTable build_table(const FeatureBank& bank, std::span<const CountSeries> counts,
                         const FeatureSpec& spec, const AreaSpec& area) {
  spec.validate();
  FeatureTable table;
  for (double dt : spec.dt_grid) {
    for (int k = 0; k < spec.lookback_intervals; ++k) table.feature_names.push_back(feature_name(dt, k));
  }
  const int anchor_offset = spec.anchor == LookbackAnchor::kCoincident ? 0 : 1;
  for (const auto& series : counts) {
    if (series.area() != area.area) continue;
    if (!bank.has_day(series.day_id())) {
      throw Error(ErrorKind::kMissingDay, "counts reference day '" + series.day_id() +
                                              "' which has no RSRP trace");
    }
    for (const auto& window : series.windows()) {
      FeatureRow row;
      row.day_id = series.day_id();
      row.area = series.area();
      row.t_label = window.t_start;
      row.label = window.count;
      row.features.reserve(table.feature_names.size());
      for (double dt : spec.dt_grid) {
        for (int k = 0; k < spec.lookback_intervals; ++k) {
          const double t0 = window.t_start - (k + anchor_offset) * spec.agg_len;
          row.features.push_back(bank.value(series.day_id(), dt, t0));
        }
      }
      table.rows.push_back(std::move(row));
    }
  }
  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const FeatureRow& a, const FeatureRow& b) {
                     return std::tie(a.day_id, a.t_label) < std::tie(b.day_id, b.t_label);
                   });
  if (table.complete_rows() == 0) {
    throw Error(ErrorKind::kEmptyResult, "feature table for area '" +
                                             std::string(to_string(area.area)) +
                                             "' has no complete rows");
  }
  return table;
}

std::string feature_table_csv(const FeatureTable& table) {
  std::string out = "day_id,area_id,t_label,label";
  for (const auto& name : table.feature_names) out += "," + name;
  out += '\n';
  for (const auto& row : table.rows) {
    out += row.day_id;
    out += ',';
    out += to_string(row.area);
    out += ',';
    out += format_double(row.t_label);
    out += ',';
    out += std::to_string(row.label);
    for (const auto& v : row.features) {
      out += ',';
      if (v) out += format_double(*v);
    }
    out += '\n';
  }
  return out;
}

void save_feature_table_csv(const FeatureTable& table, const std::filesystem::path& path) {
  write_file(path, feature_table_csv(table));
}

}  // namespace rsrpflow
