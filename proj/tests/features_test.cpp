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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.hpp"

namespace rsrpflow {
namespace {

using testing::ThrowsKind;

// Two-pass population variance written independently of the library.
double oracle_variance(const std::vector<double>& v) {
  long double mean = 0;
  for (double x : v) mean += x;
  mean /= v.size();
  long double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return static_cast<double>(ss / v.size());
}

TEST(WindowVariance, HandValues) {
  const std::vector<double> flat = {-80, -80, -80};
  EXPECT_EQ(window_variance(flat), 0.0);
  const std::vector<double> two = {-80, -82};
  EXPECT_DOUBLE_EQ(window_variance(two), 1.0);
  EXPECT_TRUE(ThrowsKind([] { window_variance(std::vector<double>{}); }, ErrorKind::kEmpty));
}

TEST(WindowVariance, MatchesTwoPassOracle) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(-90.0, 4.0);
  std::vector<double> v(1000);
  for (auto& x : v) x = n(rng);
  const double expected = oracle_variance(v);
  EXPECT_NEAR(window_variance(v), expected, 1e-10 * expected);
}

TEST(RsrpVar, ConstantTraceIsZero) {
  const auto trace = testing::trace_from("d", testing::regular_times(1000), [](double) {
    return -95.0;
  });
  for (double dt : default_dt_grid()) {
    const auto v = rsrp_var(trace, dt, 2.0, 2.0, 0.8);
    ASSERT_TRUE(v.has_value());
    EXPECT_EQ(*v, 0.0);
  }
}

TEST(RsrpVar, SinusoidEqualsHalfSquaredAmplitude) {
  const double a = 3.0;
  const auto trace = testing::sinusoid_trace("d", 10.0, 10.0, a);
  for (double t0 : {0.0, 1.0, 4.0, 7.0}) {
    const auto v = rsrp_var(trace, 0.1, t0, 2.0, 0.8);
    ASSERT_TRUE(v.has_value());
    EXPECT_NEAR(*v, a * a / 2.0, 0.01 * a * a / 2.0);
  }
  // Every single sub-window too, via the oracle.
  for (int j = 0; j < 20; ++j) {
    const auto [first, last] = trace.index_range(2.0 + 0.1 * j, 2.0 + 0.1 * (j + 1));
    std::vector<double> w(trace.rsrp().begin() + first, trace.rsrp().begin() + last);
    EXPECT_NEAR(oracle_variance(w), a * a / 2.0, 0.01 * a * a / 2.0);
  }
}

TEST(RsrpVar, SubwindowSampleCounts) {
  const auto trace = testing::sinusoid_trace("d", 10.0, 10.0, 1.0);
  for (double t0 : {0.0, 3.0, 6.0}) {
    const auto c10 = subwindow_sample_counts(trace, 0.1, t0, 2.0);
    ASSERT_EQ(c10.size(), 20u);
    for (auto c : c10) EXPECT_EQ(c, 10u);
    const auto c20 = subwindow_sample_counts(trace, 0.2, t0, 2.0);
    ASSERT_EQ(c20.size(), 10u);
    for (auto c : c20) EXPECT_EQ(c, 20u);
  }
}

TEST(RsrpVar, SubwindowCountIsAggOverDt) {
  const auto trace = testing::sinusoid_trace("d", 10.0, 7.0, 1.0);
  for (double dt : {0.05, 0.1, 0.2, 0.4, 0.5, 1.0}) {
    EXPECT_EQ(subwindow_sample_counts(trace, dt, 1.0, 2.0).size(),
              static_cast<std::size_t>(std::llround(2.0 / dt)));
  }
}

TEST(RsrpVar, LowCoverageIsMissing) {
  // Keep 40% of the window [2, 4).
  std::vector<double> t;
  for (double x : testing::regular_times(1000)) {
    if (x < 2.4 - 1e-9 || x >= 3.6 - 1e-9) t.push_back(x);
  }
  const RsrpTrace trace("d", t, std::vector<double>(t.size(), -90.0));
  EXPECT_NEAR(window_coverage(trace, 2.0, 4.0), 0.4, 1e-9);
  EXPECT_FALSE(rsrp_var(trace, 0.1, 2.0, 2.0, 0.8).has_value());
}

TEST(RsrpVar, SparseSubwindowIsMissing) {
  // Full coverage except one 0.1 s sub-window holding a single sample.
  std::vector<double> t;
  for (double x : testing::regular_times(1000)) {
    if (x < 2.51 - 1e-9 || x >= 2.6 - 1e-9) t.push_back(x);
  }
  const RsrpTrace trace("d", t, std::vector<double>(t.size(), -90.0));
  EXPECT_GE(window_coverage(trace, 2.0, 4.0), 0.8);
  EXPECT_FALSE(rsrp_var(trace, 0.1, 2.0, 2.0, 0.8).has_value());
  EXPECT_TRUE(rsrp_var(trace, 0.2, 2.0, 2.0, 0.8).has_value());
}

TEST(RsrpVar, PropertyOffsetAndScale) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  const auto times = testing::regular_times(600);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> base(times.size());
    for (auto& x : base) x = -90.0 + 3.0 * n(rng);
    const double offset = u(rng);
    const double c = u(rng);
    std::vector<double> shifted = base;
    std::vector<double> scaled = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
      shifted[i] += offset;
      scaled[i] = -90.0 + c * (base[i] + 90.0);
    }
    const RsrpTrace tb("d", times, base);
    const RsrpTrace ts("d", times, shifted);
    const RsrpTrace tc("d", times, scaled);
    for (double dt : default_dt_grid()) {
      const double vb = *rsrp_var(tb, dt, 1.0, 2.0, 0.8);
      EXPECT_NEAR(*rsrp_var(ts, dt, 1.0, 2.0, 0.8), vb, 1e-9 * (1.0 + vb));
      EXPECT_NEAR(*rsrp_var(tc, dt, 1.0, 2.0, 0.8), c * c * vb, 1e-9 * (1.0 + c * c * vb));
    }
  }
}

TEST(RsrpVar, RejectsBadWindow) {
  const auto trace = testing::sinusoid_trace("d", 5.0, 10.0, 1.0);
  EXPECT_TRUE(ThrowsKind([&] { rsrp_var(trace, 0.0, 0.0, 2.0, 0.8); }, ErrorKind::kInvalidArgument));
  EXPECT_TRUE(ThrowsKind([&] { rsrp_var(trace, 3.0, 0.0, 2.0, 0.8); }, ErrorKind::kInvalidArgument));
}

TEST(FeatureSeries, WindowCountOnTenSeconds) {
  const auto trace = testing::sinusoid_trace("d", 10.0, 10.0, 1.0);
  FeatureSpec spec;
  const auto s = feature_series(trace, 0.1, spec);
  ASSERT_EQ(s.size(), 9u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_DOUBLE_EQ(s[i].t0, static_cast<double>(i));
    EXPECT_TRUE(s[i].value.has_value());
  }
}

TEST(FeatureSeries, ConstantTraceAllZero) {
  const auto trace = testing::trace_from("d", testing::regular_times(2000), [](double) {
    return -100.0;
  });
  FeatureSpec spec;
  for (const auto& p : feature_series(trace, 0.2, spec)) {
    ASSERT_TRUE(p.value.has_value());
    EXPECT_EQ(*p.value, 0.0);
  }
}

TEST(FeatureSeries, GapMarksOverlappingWindows) {
  std::vector<double> t;
  for (double x : testing::regular_times(1000)) {
    if (x < 4.0 - 1e-9 || x >= 6.0 - 1e-9) t.push_back(x);
  }
  const RsrpTrace trace("d", t, std::vector<double>(t.size(), -90.0));
  FeatureSpec spec;
  const auto s = feature_series(trace, 0.1, spec);
  ASSERT_EQ(s.size(), 9u);
  for (const auto& p : s) {
    const bool overlaps = p.t0 >= 3.0 - 1e-9 && p.t0 <= 5.0 + 1e-9;
    EXPECT_EQ(p.value.has_value(), !overlaps) << "t0 = " << p.t0;
  }
}

TEST(BuildTable, SingleLookbackMatchesSeries) {
  const auto trace = testing::sinusoid_trace("d1", 30.0, 8.0, 2.0);
  std::vector<CountWindow> w;
  for (int i = 0; i < 29; ++i) w.push_back({static_cast<double>(i), i % 4});
  const std::vector<CountSeries> counts = {CountSeries("d1", AreaId::kSmall, w)};
  FeatureSpec spec;
  spec.dt_grid = {0.1};
  const auto table = build_table(std::span(&trace, 1), counts, spec, default_area_specs()[0]);
  const auto series = feature_series(trace, 0.1, spec);
  ASSERT_EQ(table.feature_names, std::vector<std::string>{"var_dt0.1_lb0"});
  ASSERT_EQ(table.rows.size(), 29u);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    EXPECT_EQ(row.label, static_cast<std::int64_t>(i % 4));
    EXPECT_DOUBLE_EQ(row.t_label, static_cast<double>(i));
    if (i < series.size()) {
      EXPECT_EQ(row.features[0], series[i].value);
    } else {
      EXPECT_FALSE(row.features[0].has_value());
    }
  }
}

TEST(BuildTable, LookbackColumnNamesAndOrder) {
  const auto trace = testing::sinusoid_trace("d1", 40.0, 8.0, 2.0);
  std::vector<CountWindow> w;
  for (int i = 0; i < 30; ++i) w.push_back({static_cast<double>(i), 1});
  const std::vector<CountSeries> counts = {CountSeries("d1", AreaId::kLarge, w)};
  FeatureSpec spec;
  spec.lookback_intervals = 7;
  const auto table = build_table(std::span(&trace, 1), counts, spec, default_area_specs()[2]);
  ASSERT_EQ(table.feature_names.size(), 7u * spec.dt_grid.size());
  std::size_t i = 0;
  for (double dt : spec.dt_grid) {
    for (int k = 0; k < 7; ++k) EXPECT_EQ(table.feature_names[i++], feature_name(dt, k));
  }
  EXPECT_EQ(feature_name(0.05, 0), "var_dt0.05_lb0");
  EXPECT_EQ(feature_name(1.0, 3), "var_dt1.0_lb3");
  // The first 12 s of history are missing for the deepest interval.
  EXPECT_FALSE(table.rows[11].complete());
  EXPECT_TRUE(table.rows[12].complete());
}

TEST(BuildTable, BurstLandsInOneLookbackInterval) {
  // Flat trace with a 9 Hz burst on [16, 18): for the row labelled at t = 20
  // that is the window [t - 4, t - 2), i.e. look-back interval 2.
  const auto trace = testing::trace_from("d1", testing::regular_times(4000), [](double t) {
    if (t >= 16.0 - 1e-9 && t < 18.0 - 1e-9) {
      return -90.0 + 2.0 * std::sin(2.0 * std::numbers::pi * 9.0 * t);
    }
    return -90.0;
  });
  std::vector<CountWindow> w;
  for (int i = 0; i < 38; ++i) w.push_back({static_cast<double>(i), 0});
  const std::vector<CountSeries> counts = {CountSeries("d1", AreaId::kSmall, w)};
  FeatureSpec spec;
  spec.dt_grid = {0.1, 0.2};
  spec.lookback_intervals = 4;
  const auto table = build_table(std::span(&trace, 1), counts, spec, default_area_specs()[0]);
  const auto& row = table.rows[20];
  ASSERT_DOUBLE_EQ(row.t_label, 20.0);
  for (std::size_t c = 0; c < table.feature_names.size(); ++c) {
    const bool lb2 = table.feature_names[c].ends_with("_lb2");
    ASSERT_TRUE(row.features[c].has_value());
    if (lb2) {
      EXPECT_GT(*row.features[c], 1.0) << table.feature_names[c];
    } else {
      EXPECT_EQ(*row.features[c], 0.0) << table.feature_names[c];
    }
  }
}

TEST(BuildTable, PrecedingAnchorShiftsByOneInterval) {
  const auto trace = testing::sinusoid_trace("d1", 30.0, 8.0, 2.0);
  std::vector<CountWindow> w;
  for (int i = 0; i < 29; ++i) w.push_back({static_cast<double>(i), 0});
  const std::vector<CountSeries> counts = {CountSeries("d1", AreaId::kSmall, w)};
  FeatureSpec a;
  a.dt_grid = {0.2};
  a.lookback_intervals = 2;
  FeatureSpec b = a;
  b.anchor = LookbackAnchor::kPreceding;
  const auto ta = build_table(std::span(&trace, 1), counts, a, default_area_specs()[0]);
  const auto tb = build_table(std::span(&trace, 1), counts, b, default_area_specs()[0]);
  for (std::size_t i = 4; i < 20; ++i) EXPECT_EQ(tb.rows[i].features[0], ta.rows[i].features[1]);
}

TEST(BuildTable, DeterministicAndSorted) {
  const auto c = testing::short_scenario(200.0);
  std::vector<RsrpTrace> traces;
  std::vector<CountSeries> counts;
  for (int d = 2; d >= 1; --d) {
    auto day = generate_day(c, 100 + d, "day" + std::to_string(d));
    traces.push_back(day.trace);
    counts.push_back(day.counts[0]);
  }
  FeatureSpec spec;
  spec.lookback_intervals = 2;
  const auto t1 = build_table(traces, counts, spec, default_area_specs()[0]);
  const auto t2 = build_table(traces, counts, spec, default_area_specs()[0]);
  EXPECT_EQ(feature_table_csv(t1), feature_table_csv(t2));
  for (std::size_t i = 1; i < t1.rows.size(); ++i) {
    EXPECT_LE(std::tie(t1.rows[i - 1].day_id, t1.rows[i - 1].t_label),
              std::tie(t1.rows[i].day_id, t1.rows[i].t_label));
  }
}

TEST(BuildTable, Errors) {
  const auto trace = testing::sinusoid_trace("d1", 10.0, 8.0, 2.0);
  const std::vector<CountSeries> other = {CountSeries("d2", AreaId::kSmall, {{0.0, 1}})};
  FeatureSpec spec;
  EXPECT_TRUE(ThrowsKind(
      [&] { build_table(std::span(&trace, 1), other, spec, default_area_specs()[0]); },
      ErrorKind::kMissingDay));
  const std::vector<CountSeries> late = {CountSeries("d1", AreaId::kSmall, {{50.0, 1}})};
  EXPECT_TRUE(ThrowsKind(
      [&] { build_table(std::span(&trace, 1), late, spec, default_area_specs()[0]); },
      ErrorKind::kEmptyResult));
  spec.dt_grid = {0.2, 0.1};
  EXPECT_TRUE(ThrowsKind([&] { spec.validate(); }, ErrorKind::kInvalidArgument));
}

TEST(FeatureBank, MatchesDirectEvaluation) {
  const auto day = generate_day(testing::short_scenario(120.0), 4, "day1");
  FeatureSpec spec;
  const FeatureBank bank(std::span(&day.trace, 1), spec.dt_grid, spec);
  for (double dt : spec.dt_grid) {
    for (double t0 : {0.0, 5.0, 60.0, 117.0, 118.5}) {
      EXPECT_EQ(bank.value("day1", dt, t0), rsrp_var(day.trace, dt, t0, 2.0, 0.8));
    }
    EXPECT_FALSE(bank.value("day1", dt, -2.0).has_value());
    EXPECT_FALSE(bank.value("day1", dt, 119.0).has_value());
  }
  EXPECT_TRUE(ThrowsKind([&] { bank.value("nope", 0.1, 0.0); }, ErrorKind::kMissingDay));
}

}  // namespace
}  // namespace rsrpflow
