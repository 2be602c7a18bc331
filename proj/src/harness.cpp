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

#include "rsrpflow/harness.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "rsrpflow/error.hpp"
#include "rsrpflow/shap.hpp"
#include "rsrpflow/synth.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

FeatureSpec single_dt_spec(const FeatureSpec& base, double dt, int lookback) {
  FeatureSpec spec = base;
  spec.dt_grid = {dt};
  spec.lookback_intervals = lookback;
  return spec;
}

std::vector<SplitPlan> splits_for(const Dataset& data, const ExperimentOptions& options) {
  auto splits = leave_one_day_out(data.day_ids());
  if (options.test_day) {
    std::erase_if(splits, [&](const SplitPlan& s) { return s.test_day != *options.test_day; });
    if (splits.empty()) {
      throw Error(ErrorKind::kMissingDay, "test day '" + *options.test_day + "' not in dataset");
    }
  }
  return splits;
}

FeatureTable rows_of_days(const FeatureTable& table, const std::set<std::string>& days,
                          bool complete_only) {
  FeatureTable out;
  out.feature_names = table.feature_names;
  for (const auto& row : table.rows) {
    if (days.count(row.day_id) == 0) continue;
    if (complete_only && !row.complete()) continue;
    out.rows.push_back(row);
  }
  return out;
}

struct DayRows {
  std::size_t complete = 0;
  std::size_t excluded = 0;
};

DayRows count_rows(const FeatureTable& table, const std::string& day) {
  DayRows out;
  for (const auto& row : table.rows) {
    if (row.day_id != day) continue;
    (row.complete() ? out.complete : out.excluded) += 1;
  }
  return out;
}

// The only place models are trained inside experiments.
GbdtModel fit_split(const std::string& experiment, const FeatureTable& table,
                    const SplitPlan& split, const ExperimentOptions& options) {
  const std::set<std::string> train_days(split.train_days.begin(), split.train_days.end());
  const FeatureTable train = rows_of_days(table, train_days, true);
  for (const auto& row : train.rows) {
    if (row.day_id == split.test_day) {
      throw Error(ErrorKind::kInvalidArgument,
                  experiment + ": test-day row reached the training table");
    }
  }
  if (options.fit_observer) options.fit_observer(experiment, train, split.test_day);
  return fit(train, options.params);
}

void append_means(std::vector<SweepRow>& rows, AreaId area, std::span<const double> dts) {
  for (double dt : dts) {
    SweepRow mean;
    mean.area = area;
    mean.day = std::string(kMeanDay);
    mean.dt = dt;
    double sum = 0.0;
    int n = 0;
    for (const auto& r : rows) {
      if (r.area != area || r.dt != dt || r.day == kMeanDay) continue;
      mean.n_rows += r.n_rows;
      mean.n_excluded += r.n_excluded;
      if (r.value) {
        sum += *r.value;
        ++n;
      }
    }
    if (n > 0) mean.value = sum / n;
    rows.push_back(mean);
  }
}

bool constant(std::span<const double> v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

double population_std(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

template <typename Fn>
auto named(const std::string& experiment, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), experiment + ": " + e.what());
  }
}

}  // namespace

std::vector<std::string> Dataset::day_ids() const {
  std::vector<std::string> out;
  for (const auto& t : traces) out.push_back(t.day_id());
  return out;
}

std::vector<CountSeries> Dataset::counts_for(AreaId area) const {
  std::vector<CountSeries> out;
  for (const auto& c : counts) {
    if (c.area() == area) out.push_back(c);
  }
  return out;
}

void Dataset::validate() const {
  if (traces.empty()) throw Error(ErrorKind::kEmpty, "dataset has no days");
  std::set<std::string> days;
  for (const auto& t : traces) {
    if (!days.insert(t.day_id()).second) {
      throw Error(ErrorKind::kInvalidArgument, "duplicate day '" + t.day_id() + "'");
    }
  }
  for (const auto& c : counts) {
    if (days.count(c.day_id()) == 0) {
      throw Error(ErrorKind::kMissingDay, "counts reference day '" + c.day_id() +
                                              "' which has no RSRP trace");
    }
  }
}

Dataset load_dataset(const std::filesystem::path& dir, std::span<const AreaId> areas) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::kIo, "data directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> rsrp_files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && name.starts_with("rsrp_") && name.ends_with(".csv")) {
      rsrp_files.push_back(entry.path());
    }
  }
  std::sort(rsrp_files.begin(), rsrp_files.end());
  if (rsrp_files.empty()) throw Error(ErrorKind::kIo, "no rsrp_<day>.csv files in " + dir.string());
  Dataset data;
  for (const auto& path : rsrp_files) {
    data.traces.push_back(load_rsrp_csv(path));
    const std::string& day = data.traces.back().day_id();
    for (AreaId area : areas) {
      const auto counts_path = dir / counts_file_name(day, area);
      if (!std::filesystem::exists(counts_path)) {
        throw Error(ErrorKind::kIo, "missing counts file: " + counts_path.string());
      }
      data.counts.push_back(load_counts_csv(counts_path, area, day));
    }
  }
  data.validate();
  return data;
}

Dataset dataset_from_campaign(const Campaign& campaign) {
  Dataset data;
  for (const auto& day : campaign.days) {
    data.traces.push_back(day.trace);
    data.counts.insert(data.counts.end(), day.counts.begin(), day.counts.end());
  }
  std::sort(data.traces.begin(), data.traces.end(),
            [](const RsrpTrace& a, const RsrpTrace& b) { return a.day_id() < b.day_id(); });
  data.validate();
  return data;
}

std::vector<SplitPlan> leave_one_day_out(const std::vector<std::string>& days) {
  if (days.size() < 2) {
    throw Error(ErrorKind::kInsufficientDays,
                "leave-one-day-out needs at least 2 days, got " + std::to_string(days.size()));
  }
  std::vector<SplitPlan> out;
  for (const auto& test : days) {
    SplitPlan plan;
    plan.test_day = test;
    for (const auto& d : days) {
      if (d != test) plan.train_days.push_back(d);
    }
    out.push_back(std::move(plan));
  }
  return out;
}

ClockPeriod parse_clock_period(std::string_view text) {
  const auto parse_clock = [&](std::string_view s) {
    s = trim(s);
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorKind::kConfig, "bad clock time '" + std::string(s) + "'");
    }
    const auto h = parse_int(s.substr(0, colon));
    const auto m = parse_int(s.substr(colon + 1));
    if (!h || !m || *h < 0 || *h > 24 || *m < 0 || *m > 59) {
      throw Error(ErrorKind::kConfig, "bad clock time '" + std::string(s) + "'");
    }
    return static_cast<int>(*h * 60 + *m);
  };
  const auto dash = text.find('-');
  if (dash == std::string_view::npos) {
    throw Error(ErrorKind::kConfig, "bad clock period '" + std::string(text) + "'");
  }
  return {parse_clock(text.substr(0, dash)), parse_clock(text.substr(dash + 1))};
}

std::string format_clock_period(const ClockPeriod& period) {
  const auto clock = [](int minutes) {
    std::string h = std::to_string(minutes / 60);
    std::string m = std::to_string(minutes % 60);
    if (h.size() < 2) h = "0" + h;
    if (m.size() < 2) m = "0" + m;
    return h + ":" + m;
  };
  return clock(period.start_min) + "-" + clock(period.end_min);
}

std::vector<ClockPeriod> ClassSchedule::default_no_class_periods() {
  return {{10 * 60 + 40, 10 * 60 + 55},
          {12 * 60 + 35, 13 * 60 + 30},
          {15 * 60 + 10, 15 * 60 + 25},
          {17 * 60 + 5, 17 * 60 + 20}};
}

void ClassSchedule::validate() const {
  if (day_end_min <= day_start_min) {
    throw Error(ErrorKind::kConfig, "class schedule day end must follow day start");
  }
  auto sorted = no_class_periods;
  std::sort(sorted.begin(), sorted.end(),
            [](const ClockPeriod& a, const ClockPeriod& b) { return a.start_min < b.start_min; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto& p = sorted[i];
    if (p.end_min <= p.start_min) {
      throw Error(ErrorKind::kConfig, "empty no-class period " + format_clock_period(p));
    }
    if (p.start_min < day_start_min || p.end_min > day_end_min) {
      throw Error(ErrorKind::kConfig,
                  "no-class period " + format_clock_period(p) + " lies outside the day");
    }
    if (i > 0 && p.start_min < sorted[i - 1].end_min) {
      throw Error(ErrorKind::kConfig, "no-class periods overlap at " + format_clock_period(p));
    }
  }
}

bool ClassSchedule::in_class(double t) const {
  for (const auto& p : no_class_periods) {
    const double s = (p.start_min - day_start_min) * 60.0;
    const double e = (p.end_min - day_start_min) * 60.0;
    if (t >= s && t < e) return false;
  }
  return true;
}

std::vector<AreaSpec> all_area_specs() {
  const auto specs = default_area_specs();
  return {specs.begin(), specs.end()};
}

std::vector<std::pair<double, std::optional<double>>> mean_by_dt(const std::vector<SweepRow>& rows,
                                                                 AreaId area) {
  std::vector<std::pair<double, std::optional<double>>> out;
  for (const auto& r : rows) {
    if (r.area == area && r.day == kMeanDay) out.emplace_back(r.dt, r.value);
  }
  return out;
}

FeatureBank make_bank(const Dataset& data, const ExperimentOptions& options) {
  std::vector<double> dts = options.spec.dt_grid;
  if (std::none_of(dts.begin(), dts.end(),
                   [&](double d) { return std::abs(d - options.eval_dt) < 1e-12; })) {
    dts.push_back(options.eval_dt);
  }
  return FeatureBank(data.traces, dts, options.spec);
}

std::vector<SweepRow> exp_correlation(const Dataset& data, const FeatureBank& bank,
                                      const ExperimentOptions& options) {
  options.spec.validate();
  std::vector<SweepRow> rows;
  for (const auto& area : options.areas) {
    const auto counts = data.counts_for(area.area);
    if (counts.empty()) {
      throw Error(ErrorKind::kEmpty, "no counts for area '" + std::string(to_string(area.area)) + "'");
    }
    for (const auto& series : counts) {
      for (double dt : options.spec.dt_grid) {
        SweepRow row;
        row.area = area.area;
        row.day = series.day_id();
        row.dt = dt;
        std::vector<double> x;
        std::vector<double> y;
        for (const auto& w : series.windows()) {
          const auto v = bank.value(series.day_id(), dt, w.t_start);
          if (!v) {
            ++row.n_excluded;
            continue;
          }
          x.push_back(*v);
          y.push_back(static_cast<double>(w.count));
        }
        row.n_rows = x.size();
        if (x.size() >= 2 && !constant(x) && !constant(y)) {
          row.value = options.correlation == CorrelationMethod::kEq1 ? spearman_eq1(x, y).rho
                                                                      : spearman(x, y).rho;
        }
        rows.push_back(std::move(row));
      }
    }
    append_means(rows, area.area, options.spec.dt_grid);
  }
  return rows;
}

std::vector<SweepRow> exp_rmse_sweep(const Dataset& data, const FeatureBank& bank,
                                     const ExperimentOptions& options) {
  options.spec.validate();
  const auto splits = splits_for(data, options);
  std::vector<SweepRow> rows;
  for (const auto& area : options.areas) {
    const auto counts = data.counts_for(area.area);
    for (double dt : options.spec.dt_grid) {
      const auto spec = single_dt_spec(options.spec, dt, 1);
      const FeatureTable table = build_table(bank, counts, spec, area);
      for (const auto& split : splits) {
        SweepRow row;
        row.area = area.area;
        row.day = split.test_day;
        row.dt = dt;
        const GbdtModel model = fit_split("rmse-sweep", table, split, options);
        std::vector<double> pred;
        std::vector<double> truth;
        for (const auto& r : table.rows) {
          if (r.day_id != split.test_day) continue;
          if (!r.complete()) {
            ++row.n_excluded;
            continue;
          }
          pred.push_back(predict(model, dense_row(r)));
          truth.push_back(static_cast<double>(r.label));
        }
        row.n_rows = pred.size();
        if (!pred.empty()) row.value = rmse(pred, truth);
        rows.push_back(std::move(row));
      }
    }
    append_means(rows, area.area, options.spec.dt_grid);
  }
  return rows;
}

std::vector<SweepRow> exp_shap_windows(const Dataset& data, const FeatureBank& bank,
                                       const ExperimentOptions& options) {
  options.spec.validate();
  const auto splits = splits_for(data, options);
  std::vector<SweepRow> rows;
  for (const auto& area : options.areas) {
    FeatureSpec spec = options.spec;
    spec.lookback_intervals = 1;
    const FeatureTable table = build_table(bank, data.counts_for(area.area), spec, area);
    for (const auto& split : splits) {
      const GbdtModel model = fit_split("shap-windows", table, split, options);
      std::set<std::string> attr_days;
      if (options.train_side_attribution) {
        attr_days.insert(split.train_days.begin(), split.train_days.end());
      } else {
        attr_days.insert(split.test_day);
      }
      const FeatureTable attr = rows_of_days(table, attr_days, true);
      const DayRows counted = count_rows(table, split.test_day);
      std::vector<double> shap;
      if (!attr.rows.empty()) shap = mean_abs_shap(model, attr);
      for (std::size_t j = 0; j < spec.dt_grid.size(); ++j) {
        SweepRow row;
        row.area = area.area;
        row.day = split.test_day;
        row.dt = spec.dt_grid[j];
        row.n_rows = attr.rows.size();
        row.n_excluded = counted.excluded;
        if (!shap.empty()) row.value = shap[j];
        rows.push_back(std::move(row));
      }
    }
    append_means(rows, area.area, spec.dt_grid);
  }
  return rows;
}

std::vector<LookbackRow> exp_lookback(const Dataset& data, const FeatureBank& bank,
                                      const ExperimentOptions& options) {
  if (options.lookback_k < 1) {
    throw Error(ErrorKind::kInvalidArgument, "lookback_k must be >= 1");
  }
  const auto splits = splits_for(data, options);
  std::vector<LookbackRow> rows;
  for (const auto& area : options.areas) {
    const auto spec = single_dt_spec(options.spec, options.eval_dt, options.lookback_k);
    const FeatureTable table = build_table(bank, data.counts_for(area.area), spec, area);
    std::vector<double> sums(static_cast<std::size_t>(options.lookback_k), 0.0);
    std::vector<int> present(sums.size(), 0);
    std::size_t total_rows = 0;
    std::size_t total_excluded = 0;
    for (const auto& split : splits) {
      const GbdtModel model = fit_split("lookback", table, split, options);
      std::set<std::string> attr_days;
      if (options.train_side_attribution) {
        attr_days.insert(split.train_days.begin(), split.train_days.end());
      } else {
        attr_days.insert(split.test_day);
      }
      const FeatureTable attr = rows_of_days(table, attr_days, true);
      const DayRows counted = count_rows(table, split.test_day);
      std::vector<double> shap;
      if (!attr.rows.empty()) shap = mean_abs_shap(model, attr);
      for (int k = 0; k < options.lookback_k; ++k) {
        LookbackRow row;
        row.area = area.area;
        row.day = split.test_day;
        row.lookback = k;
        row.n_rows = attr.rows.size();
        row.n_excluded = counted.excluded;
        if (!shap.empty()) {
          row.value = shap[static_cast<std::size_t>(k)];
          sums[static_cast<std::size_t>(k)] += shap[static_cast<std::size_t>(k)];
          ++present[static_cast<std::size_t>(k)];
        }
        rows.push_back(std::move(row));
      }
      total_rows += attr.rows.size();
      total_excluded += counted.excluded;
    }
    for (int k = 0; k < options.lookback_k; ++k) {
      LookbackRow mean;
      mean.area = area.area;
      mean.day = std::string(kMeanDay);
      mean.lookback = k;
      mean.n_rows = total_rows;
      mean.n_excluded = total_excluded;
      const auto i = static_cast<std::size_t>(k);
      if (present[i] > 0) mean.value = sums[i] / present[i];
      rows.push_back(std::move(mean));
    }
  }
  return rows;
}

std::vector<AreaEval> exp_eval(const Dataset& data, const FeatureBank& bank,
                               const ExperimentOptions& options,
                               std::vector<std::string>* warnings) {
  options.schedule.validate();
  const auto splits = splits_for(data, options);

  double span = 0.0;
  for (const auto& t : data.traces) span = std::max(span, t.end_time());
  bool schedule_hits_data = false;
  for (const auto& p : options.schedule.no_class_periods) {
    const double s = (p.start_min - options.schedule.day_start_min) * 60.0;
    if (s < span && (p.end_min - options.schedule.day_start_min) * 60.0 > 0.0) {
      schedule_hits_data = true;
    }
  }
  ClassSchedule schedule = options.schedule;
  if (!schedule_hits_data && !schedule.no_class_periods.empty()) {
    if (warnings) {
      warnings->push_back("class schedule lies outside the data span; all rows treated as in-class");
    }
    schedule.no_class_periods.clear();
  }

  std::vector<AreaEval> out;
  for (const auto& area : options.areas) {
    AreaEval result;
    result.area = area;
    result.dt = options.eval_dt;
    result.lookback_intervals = area.lookback_intervals();
    const auto spec = single_dt_spec(options.spec, options.eval_dt, result.lookback_intervals);
    const FeatureTable table = build_table(bank, data.counts_for(area.area), spec, area);
    for (const auto& split : splits) {
      const GbdtModel model = fit_split("evaluate", table, split, options);
      DayEval day;
      day.day = split.test_day;
      std::vector<double> pred;
      std::vector<double> truth;
      for (const auto& r : table.rows) {
        if (r.day_id != split.test_day) continue;
        PredictionPoint p;
        p.t_label = r.t_label;
        p.truth = static_cast<double>(r.label);
        p.in_class = schedule.in_class(r.t_label);
        if (r.complete()) {
          p.pred = predict(model, dense_row(r));
          pred.push_back(*p.pred);
          truth.push_back(p.truth);
        } else {
          ++day.n_excluded;
        }
        day.series.push_back(p);
      }
      day.n_rows = pred.size();
      if (!pred.empty()) {
        day.rmse = rmse(pred, truth);
        day.baseline_rmse = population_std(truth);
      }
      result.days.push_back(std::move(day));
    }
    for (const auto& d : result.days) {
      result.mean_rmse += d.rmse;
      result.mean_baseline_rmse += d.baseline_rmse;
    }
    result.mean_rmse /= static_cast<double>(result.days.size());
    result.mean_baseline_rmse /= static_cast<double>(result.days.size());
    out.push_back(std::move(result));
  }
  return out;
}

EvalReport run_all(const Dataset& data, const ExperimentOptions& options) {
  data.validate();
  EvalReport report;
  report.dataset_fingerprint = fingerprint(data);
  report.spec_fingerprint = fingerprint(options.spec);
  report.params_fingerprint = options.params.fingerprint();
  const FeatureBank bank = make_bank(data, options);
  report.correlation = named("correlate", [&] { return exp_correlation(data, bank, options); });
  report.rmse_sweep = named("rmse-sweep", [&] { return exp_rmse_sweep(data, bank, options); });
  report.shap_windows = named("shap-windows", [&] { return exp_shap_windows(data, bank, options); });
  report.lookback = named("lookback", [&] { return exp_lookback(data, bank, options); });
  report.eval = named("evaluate", [&] { return exp_eval(data, bank, options, &report.warnings); });
  return report;
}

std::vector<EcdfPoint> eval_ecdf(const DayEval& day, bool in_class) {
  std::vector<double> errors;
  for (const auto& p : day.series) {
    if (p.pred && p.in_class == in_class) errors.push_back(std::abs(*p.pred - p.truth));
  }
  if (errors.empty()) return {};
  return ecdf(errors);
}

std::vector<EcdfPoint> eval_ecdf(const AreaEval& area, bool in_class) {
  std::vector<double> errors;
  for (const auto& d : area.days) {
    for (const auto& p : d.series) {
      if (p.pred && p.in_class == in_class) errors.push_back(std::abs(*p.pred - p.truth));
    }
  }
  if (errors.empty()) return {};
  return ecdf(errors);
}

std::vector<BoxplotStats> eval_boxplot(const AreaEval& area) {
  std::vector<double> pred;
  std::vector<double> truth;
  for (const auto& d : area.days) {
    for (const auto& p : d.series) {
      if (!p.pred) continue;
      pred.push_back(*p.pred);
      truth.push_back(p.truth);
    }
  }
  if (pred.empty()) return {};
  return abs_error_by_count(pred, truth);
}

std::string fingerprint(const Dataset& data) {
  Fnv1a h;
  for (const auto& t : data.traces) {
    h.update(t.day_id()).update(t.nominal_interval());
    for (double v : t.times()) h.update(v);
    for (double v : t.rsrp()) h.update(v);
  }
  for (const auto& c : data.counts) {
    h.update(c.day_id()).update(to_string(c.area()));
    for (const auto& w : c.windows()) {
      h.update(w.t_start).update(static_cast<std::uint64_t>(w.count));
    }
  }
  return h.hex();
}

std::string fingerprint(const FeatureSpec& spec) {
  Fnv1a h;
  for (double dt : spec.dt_grid) h.update(dt);
  h.update(spec.agg_len).update(spec.shift).update(static_cast<std::uint64_t>(spec.lookback_intervals));
  h.update(spec.min_coverage).update(to_string(spec.anchor));
  return h.hex();
}

}  // namespace rsrpflow
