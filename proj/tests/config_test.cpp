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

#include "rsrpflow/config.hpp"

#include <gtest/gtest.h>

#include "rsrpflow/text.hpp"
#include "test_util.hpp"

namespace rsrpflow {
namespace {

using testing::TempDir;
using testing::ThrowsKind;

TEST(Config, EmptyTextGivesDefaults) {
  const auto c = parse_run_config("");
  EXPECT_EQ(c.run.seed, 42u);
  EXPECT_EQ(c.run.n_days, 5);
  EXPECT_EQ(c.features.dt_grid, default_dt_grid());
  EXPECT_EQ(c.run.areas.size(), 3u);
  EXPECT_EQ(c.to_ini(), RunConfig{}.to_ini());
}

TEST(Config, ParsesEverySection) {
  const auto c = parse_run_config(R"(
; comment
[paths]
data_dir = in
out_dir = results

[features]
dt_grid = 0.1, 0.2
min_coverage = 0.9
lookback_anchor = preceding

[gbdt]
n_trees = 50
max_depth = 4

[run]
seed = 7
eval_dt = 0.1
lookback_k = 3
correlation = eq1
attribution = train
charts = true
areas = small,large
test_day = day2

[classes]
day_start = 08:00
no_class = 10:00-10:30

[areas]
large_lookback_s = 6
small_street_m = 3.0

[scenario]
duration_s = 120
count_semantics = mean_instantaneous

[schedule]
segments = 0:60:0.1, 60:120:0.5
)");
  EXPECT_EQ(c.data_dir, "in");
  EXPECT_EQ(c.out_dir, "results");
  EXPECT_EQ(c.features.dt_grid, (std::vector<double>{0.1, 0.2}));
  EXPECT_EQ(c.features.min_coverage, 0.9);
  EXPECT_EQ(c.features.anchor, LookbackAnchor::kPreceding);
  EXPECT_EQ(c.gbdt.n_trees, 50);
  EXPECT_EQ(c.gbdt.max_depth, 4);
  EXPECT_EQ(c.run.seed, 7u);
  EXPECT_EQ(c.run.correlation, CorrelationMethod::kEq1);
  EXPECT_TRUE(c.run.train_side_attribution);
  EXPECT_TRUE(c.run.charts);
  EXPECT_EQ(c.run.areas, (std::vector<AreaId>{AreaId::kSmall, AreaId::kLarge}));
  EXPECT_EQ(c.run.test_day, "day2");
  EXPECT_EQ(c.schedule.day_start_min, 480);
  ASSERT_EQ(c.schedule.no_class_periods.size(), 1u);
  EXPECT_EQ(c.schedule.no_class_periods[0].end_min, 630);
  EXPECT_EQ(c.scenario.areas[2].spec.effective_lookback_s, 6.0);
  EXPECT_EQ(c.scenario.areas[0].street_length_m, 3.0);
  EXPECT_EQ(c.scenario.duration_s, 120.0);
  EXPECT_EQ(c.scenario.count_semantics, CountSemantics::kMeanInstantaneous);
  ASSERT_EQ(c.scenario.schedule.size(), 2u);
  EXPECT_EQ(c.scenario.schedule[1].rate_per_s, 0.5);

  const auto areas = c.selected_areas();
  ASSERT_EQ(areas.size(), 2u);
  EXPECT_EQ(areas[1].lookback_intervals(), 3);
  const auto o = c.experiment_options();
  EXPECT_EQ(o.eval_dt, 0.1);
  EXPECT_EQ(o.lookback_k, 3);
  EXPECT_EQ(o.test_day, "day2");
  EXPECT_EQ(o.params.n_trees, 50);
}

TEST(Config, EchoRoundTrips) {
  auto c = parse_run_config("[run]\nseed = 9\nareas = medium\n[features]\ndt_grid = 0.05, 0.3\n"
                            "[pedestrian]\ndoppler_max_hz = 12.5\n[shadowing]\nsigma_db = 1.5\n");
  const auto text = c.to_ini();
  const auto back = parse_run_config(text);
  EXPECT_EQ(back.to_ini(), text);
  EXPECT_EQ(back.scenario.pedestrian.doppler_max_hz, 12.5);
  EXPECT_EQ(back.run.areas, std::vector<AreaId>{AreaId::kMedium});
}

TEST(Config, OverridesApplyOnTop) {
  auto c = parse_run_config("[run]\nseed = 9\nlookback_k = 4\n");
  apply_ini(c, "[run]\nseed = 11\n");
  EXPECT_EQ(c.run.seed, 11u);
  EXPECT_EQ(c.run.lookback_k, 4);
}

TEST(Config, Errors) {
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[nope]\nx = 1\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[run]\nbogus = 1\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[run]\nseed = abc\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[run]\nn_days = 0\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[run]\nareas = huge\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(
      ThrowsKind([] { parse_run_config("[schedule]\nsegments = 0:10:-1\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[features]\ndt_grid = 0\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { parse_run_config("[run\n"); }, ErrorKind::kConfig));
  EXPECT_TRUE(ThrowsKind([] { load_run_config("/nonexistent/rsrpflow.ini"); }, ErrorKind::kConfig));
}

TEST(Config, ListParsers) {
  EXPECT_EQ(parse_number_list(" 0.1 ,0.2,1 "), (std::vector<double>{0.1, 0.2, 1.0}));
  EXPECT_EQ(parse_area_list("large, small"), (std::vector<AreaId>{AreaId::kLarge, AreaId::kSmall}));
  EXPECT_EQ(parse_correlation_method("tie_corrected"), CorrelationMethod::kTieCorrected);
  EXPECT_EQ(to_string(CorrelationMethod::kEq1), "eq1");
  EXPECT_TRUE(ThrowsKind([] { parse_correlation_method("pearson"); }, ErrorKind::kConfig));
}

TEST(Config, LoadsFromFile) {
  TempDir dir("config");
  write_file(dir.path() / "run.ini", "[gbdt]\nlearning_rate = 0.05\n");
  EXPECT_EQ(load_run_config(dir.path() / "run.ini").gbdt.learning_rate, 0.05);
}

}  // namespace
}  // namespace rsrpflow
