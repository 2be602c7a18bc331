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

// RSRP-variance features.
//
// RSRP-Var(dt, agg) at window start t0 splits [t0, t0 + agg) into consecutive
// non-overlapping sub-windows of length dt (a trailing partial sub-window is
// dropped), takes the population variance of the dBm samples in each
// sub-window and averages those variances. A value is missing when the
// aggregation window has less than min_coverage of its expected samples or any
// sub-window holds fewer than two samples.
//
// Look-back interval k of a label window starting at t is the aggregation
// window starting at t - k * agg (coincident anchor, k = 0 is the label
// window itself) or at t - (k + 1) * agg (preceding anchor).

#ifndef RSRPFLOW_FEATURES_HPP_
#define RSRPFLOW_FEATURES_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsrpflow/core_data.hpp"

namespace rsrpflow {

enum class LookbackAnchor { kCoincident, kPreceding };

std::string_view to_string(LookbackAnchor anchor);
LookbackAnchor parse_anchor(std::string_view text);

// {0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0}
std::vector<double> default_dt_grid();

struct FeatureSpec {
  std::vector<double> dt_grid = default_dt_grid();
  double agg_len = kCountWindowLength;
  double shift = kCountShift;
  int lookback_intervals = 1;
  double min_coverage = 0.8;
  LookbackAnchor anchor = LookbackAnchor::kCoincident;

  void validate() const;
};

// `var_dt{dt}_lb{k}`, e.g. var_dt0.05_lb0 or var_dt1.0_lb3.
std::string feature_name(double dt, int lookback);

struct FeatureRow {
  std::string day_id;
  AreaId area = AreaId::kSmall;
  double t_label = 0.0;
  std::vector<std::optional<double>> features;
  std::int64_t label = 0;

  bool complete() const;
};

struct FeatureTable {
  std::vector<std::string> feature_names;
  std::vector<FeatureRow> rows;

  std::size_t complete_rows() const;
  // Copy holding only rows without missing features.
  FeatureTable complete_only() const;
  // Column index of a feature name; throws when absent.
  std::size_t column(const std::string& name) const;
};

double window_variance(std::span<const double> values);

std::optional<double> rsrp_var(const RsrpTrace& trace, double dt, double t0, double agg_len,
                               double min_coverage);

// Sample count of each sub-window rsrp_var would use at t0.
std::vector<std::size_t> subwindow_sample_counts(const RsrpTrace& trace, double dt, double t0,
                                                 double agg_len);

struct FeaturePoint {
  double t0 = 0.0;
  std::optional<double> value;
};

// rsrp_var at t0 = 0, shift, 2 shift, ... for every window that fits inside
// the trace's coverage.
std::vector<FeaturePoint> feature_series(const RsrpTrace& trace, double dt,
                                         const FeatureSpec& spec);

// Precomputed feature series for a set of days, keyed by (day, dt). Lets the
// experiments share one pass over each trace.
class FeatureBank {
 public:
  FeatureBank(std::span<const RsrpTrace> traces, std::span<const double> dts,
              const FeatureSpec& spec);

  bool has_day(const std::string& day_id) const;
  // Feature value of the aggregation window starting at t0.
  std::optional<double> value(const std::string& day_id, double dt, double t0) const;

 private:
  struct DaySeries {
    const RsrpTrace* trace = nullptr;
    std::map<double, std::vector<std::optional<double>>> by_dt;
  };
  std::map<std::string, DaySeries> days_;
  double shift_;
  double agg_len_;
  double min_coverage_;
};

FeatureTable build_table(std::span<const RsrpTrace> traces, std::span<const CountSeries> counts,
                         const FeatureSpec& spec, const AreaSpec& area);
FeatureTable build_table(const FeatureBank& bank, std::span<const CountSeries> counts,
                         const FeatureSpec& spec, const AreaSpec& area);

// Header `day_id,area_id,t_label,label,<feature names>`; missing is empty.
std::string feature_table_csv(const FeatureTable& table);
void save_feature_table_csv(const FeatureTable& table, const std::filesystem::path& path);

}  // namespace rsrpflow

#endif  // RSRPFLOW_FEATURES_HPP_
