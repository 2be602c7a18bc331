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

// Run configuration: one sectioned INI file holding every setting of a run.
// Keys left out keep their defaults; unknown sections or keys are errors.
//
//   [paths]        data_dir, out_dir
//   [features]     dt_grid, agg_len_s, shift_s, min_coverage, lookback_anchor
//   [gbdt]         n_trees, max_depth, learning_rate, min_samples_leaf, seed
//   [run]          seed, n_days, eval_dt, lookback_k, correlation, attribution,
//                  charts, areas, test_day
//   [classes]      day_start, day_end, no_class
//   [areas]        <area>_m2, <area>_lookback_s, <area>_street_m
//   [scenario] [shadowing] [pedestrian] [packet_loss] [schedule]
//                  synthetic generator settings, see scenario_echo()

#ifndef RSRPFLOW_CONFIG_HPP_
#define RSRPFLOW_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsrpflow/features.hpp"
#include "rsrpflow/gbdt.hpp"
#include "rsrpflow/harness.hpp"
#include "rsrpflow/stats.hpp"
#include "rsrpflow/synth.hpp"

namespace rsrpflow {

struct RunOptions {
  std::uint64_t seed = 42;
  int n_days = 5;
  double eval_dt = 0.2;
  int lookback_k = 7;
  CorrelationMethod correlation = CorrelationMethod::kTieCorrected;
  bool train_side_attribution = false;
  bool charts = false;
  std::vector<AreaId> areas = {kAllAreas.begin(), kAllAreas.end()};
  std::optional<std::string> test_day;
};

struct RunConfig {
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "out";
  FeatureSpec features;
  GbdtParams gbdt;
  ScenarioConfig scenario;  // also holds the area specs
  ClassSchedule schedule;
  RunOptions run;

  void validate() const;
  std::vector<AreaSpec> selected_areas() const;
  ExperimentOptions experiment_options() const;
  // Full echo, loadable by parse_run_config.
  std::string to_ini() const;
};

RunConfig parse_run_config(std::string_view ini_text);
RunConfig load_run_config(const std::filesystem::path& path);
// Applies ini_text on top of an existing config.
void apply_ini(RunConfig& config, std::string_view ini_text);

std::vector<double> parse_number_list(std::string_view text);
std::vector<AreaId> parse_area_list(std::string_view text);
CorrelationMethod parse_correlation_method(std::string_view text);
std::string_view to_string(CorrelationMethod method);

}  // namespace rsrpflow

#endif  // RSRPFLOW_CONFIG_HPP_
