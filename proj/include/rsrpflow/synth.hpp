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

// Synthetic measurement days.
//
// Pedestrians walk along a street through nested counting areas centred on
// one point. Arrivals (the time a pedestrian passes the centre) follow a
// piecewise-constant Poisson process. While a pedestrian is inside the sensing
// zone, the trace carries a sinusoidal fading burst at that pedestrian's
// Doppler frequency with raised-cosine on/off ramps. On top of that sit a
// baseline level, Ornstein-Uhlenbeck shadowing, white measurement noise and
// random dropouts. Counts are derived from the crossing events only.

#ifndef RSRPFLOW_SYNTH_HPP_
#define RSRPFLOW_SYNTH_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rsrpflow/core_data.hpp"

namespace rsrpflow {

enum class CountSemantics { kDistinct, kMeanInstantaneous };

std::string_view to_string(CountSemantics semantics);
CountSemantics parse_count_semantics(std::string_view text);

struct ShadowingConfig {
  double sigma_db = 2.0;          // stationary standard deviation
  double time_constant_s = 3.0;

  // Per-sample AR(1) coefficient exp(-interval / time_constant).
  double ar1_coefficient(double sample_interval_s) const;
};

struct StreetArea {
  AreaSpec spec;
  double street_length_m = 2.6;
};

struct RateSegment {
  double start_s = 0.0;
  double end_s = 0.0;
  double rate_per_s = 0.0;
};

struct PedestrianModel {
  double speed_mean_mps = 1.3;
  double speed_sd_mps = 0.15;
  double doppler_min_hz = 4.0;
  double doppler_max_hz = 15.0;
  double amplitude_mean_db = 1.5;
  double amplitude_sd_db = 0.3;
};

struct PacketLoss {
  double dropout_rate_per_hour = 2.0;
  double dropout_len_mean_s = 3.0;
};

struct ScenarioConfig {
  double duration_s = 36000.0;
  double sample_interval_s = kDefaultSampleInterval;
  double baseline_rsrp_dbm = -90.0;
  ShadowingConfig shadowing;
  double noise_sigma_db = 0.5;
  std::vector<StreetArea> areas = default_street_areas();
  // Length of street around the centre point inside which a pedestrian
  // perturbs the signal.
  double sensing_length_m = 2.6;
  double envelope_ramp_s = 0.25;
  std::vector<RateSegment> schedule = default_rate_schedule(36000.0);
  PedestrianModel pedestrian;
  PacketLoss packet_loss;
  CountSemantics count_semantics = CountSemantics::kDistinct;
  std::uint64_t seed = 42;

  void validate() const;

  // 2.6 / 5.2 / 10.4 m, i.e. about 2 / 4 / 8 s at walking speed.
  static std::vector<StreetArea> default_street_areas();
  // Campus day starting at 9:00: class hours at a low rate, the four breaks
  // (10:40, 12:35, 15:10, 17:05) at higher rates. Clipped to duration_s.
  static std::vector<RateSegment> default_rate_schedule(double duration_s);
};

// Breaks of the default campus day, in seconds after 9:00.
struct BreakPeriod {
  double start_s;
  double end_s;
};
std::vector<BreakPeriod> default_break_periods();

struct CrossingEvent {
  std::string pedestrian_id;  // "<day>/<index>"
  AreaId area = AreaId::kSmall;
  double t_enter = 0.0;
  double t_exit = 0.0;
  double doppler_hz = 0.0;
  double amplitude_db = 0.0;

  std::string day_id() const;
  friend bool operator==(const CrossingEvent&, const CrossingEvent&) = default;
};

struct DayData {
  RsrpTrace trace;
  std::vector<CountSeries> counts;  // one per configured area, in config order
  std::vector<CrossingEvent> events;
  std::vector<GapInterval> dropouts;
};

DayData generate_day(const ScenarioConfig& config, std::uint64_t day_seed, std::string day_id);

// Per-window counts of the events of one day and area, on windows starting at
// 0, 1, 2, ... that fit inside duration_s.
CountSeries counts_from_events(std::span<const CrossingEvent> events, const std::string& day_id,
                               AreaId area, double duration_s, CountSemantics semantics);

struct Campaign {
  ScenarioConfig config;
  std::vector<DayData> days;  // day1, day2, ...
};

std::uint64_t derive_day_seed(std::uint64_t master_seed, int day_index);
std::string synth_day_id(int day_index);  // 0 -> "day1"

Campaign generate_campaign(const ScenarioConfig& config, int n_days, std::uint64_t seed);

// rsrp_<day>.csv, counts_<day>_<area>.csv and manifest.csv.
// Returns the paths written, CSVs first.
std::vector<std::filesystem::path> write_campaign(const Campaign& campaign,
                                                  const std::filesystem::path& dir);

inline constexpr std::string_view kManifestFileName = "manifest.csv";

std::string manifest_csv(std::span<const CrossingEvent> events);
std::vector<CrossingEvent> load_manifest(const std::filesystem::path& path);

// INI text with [scenario], [shadowing], [pedestrian], [packet_loss],
// [schedule] and [areas] sections, readable by load_run_config.
std::string scenario_echo(const ScenarioConfig& config);

}  // namespace rsrpflow

#endif  // RSRPFLOW_SYNTH_HPP_
