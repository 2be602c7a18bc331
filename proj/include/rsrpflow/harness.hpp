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

// Experiment drivers. Every experiment that trains uses leave-one-day-out
// splits: each day is the test day once and the remaining days train the
// model. Rows with a missing feature are excluded and counted.

#ifndef RSRPFLOW_HARNESS_HPP_
#define RSRPFLOW_HARNESS_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rsrpflow/core_data.hpp"
#include "rsrpflow/features.hpp"
#include "rsrpflow/gbdt.hpp"
#include "rsrpflow/stats.hpp"

namespace rsrpflow {

struct Campaign;

// Traces and counts of a set of days. Traces are ordered by day id.
struct Dataset {
  std::vector<RsrpTrace> traces;
  std::vector<CountSeries> counts;

  std::vector<std::string> day_ids() const;
  std::vector<CountSeries> counts_for(AreaId area) const;
  void validate() const;  // every count series has a trace and vice versa
};

// Reads rsrp_<day>.csv for every day found in dir and the counts file of each
// requested area for each day. A missing counts file is an error naming it.
Dataset load_dataset(const std::filesystem::path& dir, std::span<const AreaId> areas);
Dataset dataset_from_campaign(const Campaign& campaign);

struct SplitPlan {
  std::vector<std::string> train_days;
  std::string test_day;
};

// One split per day; throws kInsufficientDays for fewer than two days.
std::vector<SplitPlan> leave_one_day_out(const std::vector<std::string>& days);

struct ClockPeriod {
  int start_min = 0;  // minutes after midnight
  int end_min = 0;
  friend bool operator==(const ClockPeriod&, const ClockPeriod&) = default;
};

// "10:40-10:55"
ClockPeriod parse_clock_period(std::string_view text);
std::string format_clock_period(const ClockPeriod& period);

struct ClassSchedule {
  int day_start_min = 9 * 60;
  int day_end_min = 19 * 60;
  std::vector<ClockPeriod> no_class_periods = default_no_class_periods();

  void validate() const;
  // t is seconds after day start.
  bool in_class(double t) const;

  // 10:40-10:55, 12:35-13:30, 15:10-15:25, 17:05-17:20
  static std::vector<ClockPeriod> default_no_class_periods();
};

// Receives the exact training table of every fit together with the day held
// out, before the fit runs.
using FitObserver = std::function<void(const std::string& experiment, const FeatureTable& train,
                                       const std::string& test_day)>;

std::vector<AreaSpec> all_area_specs();

struct ExperimentOptions {
  FeatureSpec spec;  // dt grid, coverage, anchor; lookback_intervals is ignored
  GbdtParams params;
  std::vector<AreaSpec> areas = all_area_specs();
  CorrelationMethod correlation = CorrelationMethod::kTieCorrected;
  double eval_dt = 0.2;
  int lookback_k = 7;
  bool train_side_attribution = false;
  std::optional<std::string> test_day;  // restrict splits to one test day
  ClassSchedule schedule;
  FitObserver fit_observer;
};

// One value per (area, day, dt). Day "mean" rows hold the across-day mean of
// the per-day values that are present.
struct SweepRow {
  AreaId area = AreaId::kSmall;
  std::string day;
  double dt = 0.0;
  std::optional<double> value;
  std::size_t n_rows = 0;
  std::size_t n_excluded = 0;
};

struct LookbackRow {
  AreaId area = AreaId::kSmall;
  std::string day;
  int lookback = 0;
  std::optional<double> value;
  std::size_t n_rows = 0;
  std::size_t n_excluded = 0;
};

inline constexpr std::string_view kMeanDay = "mean";

struct PredictionPoint {
  double t_label = 0.0;
  double truth = 0.0;
  std::optional<double> pred;
  bool in_class = true;
};

struct DayEval {
  std::string day;
  double rmse = 0.0;
  double baseline_rmse = 0.0;  // mean predictor, i.e. test-label std
  std::size_t n_rows = 0;
  std::size_t n_excluded = 0;
  std::vector<PredictionPoint> series;
};

struct AreaEval {
  AreaSpec area;
  double dt = 0.2;
  int lookback_intervals = 1;
  std::vector<DayEval> days;
  double mean_rmse = 0.0;
  double mean_baseline_rmse = 0.0;
};

struct EvalReport {
  std::vector<SweepRow> correlation;
  std::vector<SweepRow> rmse_sweep;
  std::vector<SweepRow> shap_windows;
  std::vector<LookbackRow> lookback;
  std::vector<AreaEval> eval;
  std::vector<std::string> warnings;
  std::string dataset_fingerprint;
  std::string spec_fingerprint;
  std::string params_fingerprint;
};

// Mean of present per-day values keyed by dt, for one area.
std::vector<std::pair<double, std::optional<double>>> mean_by_dt(const std::vector<SweepRow>& rows,
                                                                 AreaId area);

std::vector<SweepRow> exp_correlation(const Dataset& data, const FeatureBank& bank,
                                      const ExperimentOptions& options);
std::vector<SweepRow> exp_rmse_sweep(const Dataset& data, const FeatureBank& bank,
                                     const ExperimentOptions& options);
std::vector<SweepRow> exp_shap_windows(const Dataset& data, const FeatureBank& bank,
                                       const ExperimentOptions& options);
std::vector<LookbackRow> exp_lookback(const Dataset& data, const FeatureBank& bank,
                                      const ExperimentOptions& options);
std::vector<AreaEval> exp_eval(const Dataset& data, const FeatureBank& bank,
                               const ExperimentOptions& options,
                               std::vector<std::string>* warnings = nullptr);

// Bank over the dt grid plus eval_dt.
FeatureBank make_bank(const Dataset& data, const ExperimentOptions& options);

// Runs all five experiments in order. Errors are rethrown with the
// experiment name prefixed.
EvalReport run_all(const Dataset& data, const ExperimentOptions& options);

// Per-day ECDF of absolute errors on in-class or no-class rows of an area.
std::vector<EcdfPoint> eval_ecdf(const DayEval& day, bool in_class);
std::vector<EcdfPoint> eval_ecdf(const AreaEval& area, bool in_class);  // pooled over days
std::vector<BoxplotStats> eval_boxplot(const AreaEval& area);          // pooled over days

std::string fingerprint(const Dataset& data);
std::string fingerprint(const FeatureSpec& spec);

}  // namespace rsrpflow

#endif  // RSRPFLOW_HARNESS_HPP_
