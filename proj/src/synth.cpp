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

#include "rsrpflow/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

constexpr double kInClassRate = 0.1;
constexpr double kShortBreakRate = 0.5;
constexpr double kLunchRate = 0.3;

// Independent random streams of one day.
enum class Stream : std::uint64_t {
  kArrivals = 1,
  kPedestrians = 2,
  kShadowing = 3,
  kNoise = 4,
  kDropouts = 5,
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t day_seed, Stream stream) {
  return std::mt19937_64(splitmix64(day_seed ^ splitmix64(static_cast<std::uint64_t>(stream))));
}

// Sample times on a microsecond grid so that they print and parse exactly.
double sample_time(std::size_t i, double interval) {
  return std::round(static_cast<double>(i) * interval * 1e6) / 1e6;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::kConfig, message);
}

struct Pedestrian {
  double center_time;
  double speed;
  double doppler_hz;
  double amplitude_db;
  double phase;
};

std::vector<double> draw_arrivals(const ScenarioConfig& config, std::uint64_t day_seed) {
  auto rng = make_stream(day_seed, Stream::kArrivals);
  std::vector<double> arrivals;
  for (const auto& seg : config.schedule) {
    const double end = std::min(seg.end_s, config.duration_s);
    if (seg.rate_per_s <= 0.0 || end <= seg.start_s) continue;
    std::exponential_distribution<double> gap(seg.rate_per_s);
    double t = seg.start_s;
    while (true) {
      t += gap(rng);
      if (t >= end) break;
      arrivals.push_back(t);
    }
  }
  std::sort(arrivals.begin(), arrivals.end());
  return arrivals;
}

std::vector<Pedestrian> draw_pedestrians(const ScenarioConfig& config, std::uint64_t day_seed,
                                         const std::vector<double>& arrivals) {
  auto rng = make_stream(day_seed, Stream::kPedestrians);
  const auto& p = config.pedestrian;
  std::normal_distribution<double> speed(p.speed_mean_mps, p.speed_sd_mps);
  std::uniform_real_distribution<double> doppler(p.doppler_min_hz, p.doppler_max_hz);
  std::normal_distribution<double> amplitude(p.amplitude_mean_db, p.amplitude_sd_db);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double min_speed = 0.25 * p.speed_mean_mps;

  std::vector<Pedestrian> out;
  out.reserve(arrivals.size());
  for (double c : arrivals) {
    Pedestrian ped{};
    ped.center_time = c;
    do {
      ped.speed = speed(rng);
    } while (ped.speed < min_speed);
    ped.doppler_hz = doppler(rng);
    do {
      ped.amplitude_db = amplitude(rng);
    } while (ped.amplitude_db <= 0.0);
    ped.phase = phase(rng);
    out.push_back(ped);
  }
  return out;
}

void add_bursts(const ScenarioConfig& config, const std::vector<Pedestrian>& peds,
                const std::vector<double>& times, std::vector<double>& signal) {
  const double interval = config.sample_interval_s;
  for (const auto& ped : peds) {
    const double half = config.sensing_length_m / (2.0 * ped.speed);
    const double s0 = ped.center_time - half;
    const double s1 = ped.center_time + half;
    const double ramp = std::min(config.envelope_ramp_s, half);
    const double first = std::max(0.0, std::ceil(s0 / interval - 1e-9));
    for (auto i = static_cast<std::size_t>(first); i < times.size(); ++i) {
      const double t = times[i];
      if (t > s1) break;
      if (t < s0) continue;
      double env = 1.0;
      if (ramp > 0.0) {
        const double edge = std::min(t - s0, s1 - t);
        if (edge < ramp) env = 0.5 * (1.0 - std::cos(std::numbers::pi * edge / ramp));
      }
      signal[i] += ped.amplitude_db *
                   std::sin(2.0 * std::numbers::pi * ped.doppler_hz * t + ped.phase) * env;
    }
  }
}

void add_shadowing(const ScenarioConfig& config, std::uint64_t day_seed,
                   std::vector<double>& signal) {
  if (config.shadowing.sigma_db <= 0.0 || signal.empty()) return;
  auto rng = make_stream(day_seed, Stream::kShadowing);
  std::normal_distribution<double> unit(0.0, 1.0);
  const double a = config.shadowing.ar1_coefficient(config.sample_interval_s);
  const double sigma = config.shadowing.sigma_db;
  const double innovation = sigma * std::sqrt(1.0 - a * a);
  double x = sigma * unit(rng);
  for (double& v : signal) {
    v += x;
    x = a * x + innovation * unit(rng);
  }
}

void add_noise(const ScenarioConfig& config, std::uint64_t day_seed,
               std::vector<double>& signal) {
  if (config.noise_sigma_db <= 0.0) return;
  auto rng = make_stream(day_seed, Stream::kNoise);
  std::normal_distribution<double> noise(0.0, config.noise_sigma_db);
  for (double& v : signal) v += noise(rng);
}

std::vector<GapInterval> draw_dropouts(const ScenarioConfig& config, std::uint64_t day_seed) {
  const auto& loss = config.packet_loss;
  if (loss.dropout_rate_per_hour <= 0.0 || loss.dropout_len_mean_s <= 0.0) return {};
  auto rng = make_stream(day_seed, Stream::kDropouts);
  std::poisson_distribution<int> how_many(loss.dropout_rate_per_hour * config.duration_s / 3600.0);
  std::uniform_real_distribution<double> start(0.0, config.duration_s);
  std::exponential_distribution<double> length(1.0 / loss.dropout_len_mean_s);
  const int n = how_many(rng);
  std::vector<GapInterval> raw;
  for (int i = 0; i < n; ++i) {
    const double s = start(rng);
    const double len = length(rng);
    raw.push_back({s, std::min(s + len, config.duration_s)});
  }
  std::sort(raw.begin(), raw.end(),
            [](const GapInterval& a, const GapInterval& b) { return a.start < b.start; });
  std::vector<GapInterval> merged;
  for (const auto& g : raw) {
    if (!merged.empty() && g.start <= merged.back().end) {
      merged.back().end = std::max(merged.back().end, g.end);
    } else {
      merged.push_back(g);
    }
  }
  return merged;
}

std::string ini_number(double value) { return format_double(value); }

}  // namespace

std::string_view to_string(CountSemantics semantics) {
  return semantics == CountSemantics::kDistinct ? "distinct" : "mean_instantaneous";
}

CountSemantics parse_count_semantics(std::string_view text) {
  if (text == "distinct") return CountSemantics::kDistinct;
  if (text == "mean_instantaneous") return CountSemantics::kMeanInstantaneous;
  throw Error(ErrorKind::kConfig, "unknown count semantics '" + std::string(text) + "'");
}

double ShadowingConfig::ar1_coefficient(double sample_interval_s) const {
  return std::exp(-sample_interval_s / time_constant_s);
}

std::vector<StreetArea> ScenarioConfig::default_street_areas() {
  const auto specs = default_area_specs();
  return {{specs[0], 2.6}, {specs[1], 5.2}, {specs[2], 10.4}};
}

std::vector<BreakPeriod> default_break_periods() {
  // 10:40-10:55, 12:35-13:30, 15:10-15:25, 17:05-17:20
  return {{6000.0, 6900.0}, {12900.0, 16200.0}, {22200.0, 23100.0}, {29100.0, 30000.0}};
}

std::vector<RateSegment> ScenarioConfig::default_rate_schedule(double duration_s) {
  std::vector<RateSegment> out;
  double cursor = 0.0;
  for (const auto& b : default_break_periods()) {
    if (cursor >= duration_s) break;
    out.push_back({cursor, std::min(b.start_s, duration_s), kInClassRate});
    if (b.start_s >= duration_s) {
      cursor = duration_s;
      break;
    }
    const double rate = b.end_s - b.start_s > 1800.0 ? kLunchRate : kShortBreakRate;
    out.push_back({b.start_s, std::min(b.end_s, duration_s), rate});
    cursor = b.end_s;
  }
  if (cursor < duration_s) out.push_back({cursor, duration_s, kInClassRate});
  return out;
}

void ScenarioConfig::validate() const {
  require(std::isfinite(duration_s) && duration_s > kCountWindowLength,
          "duration_s must exceed the 2 s count window");
  require(sample_interval_s > 0.0 && sample_interval_s < duration_s,
          "sample_interval_s must be positive");
  require(std::isfinite(baseline_rsrp_dbm), "baseline_rsrp_dbm must be finite");
  require(shadowing.sigma_db >= 0.0, "shadowing sigma_db must be >= 0");
  require(shadowing.time_constant_s > 0.0, "shadowing time_constant_s must be > 0");
  require(noise_sigma_db >= 0.0, "noise_sigma_db must be >= 0");
  require(!areas.empty(), "at least one area is required");
  for (const auto& a : areas) {
    a.spec.validate();
    require(a.street_length_m > 0.0, "street_length_m must be > 0");
  }
  require(sensing_length_m > 0.0, "sensing_length_m must be > 0");
  require(envelope_ramp_s >= 0.0, "envelope_ramp_s must be >= 0");
  for (const auto& seg : schedule) {
    require(seg.rate_per_s >= 0.0 && std::isfinite(seg.rate_per_s),
            "arrival rates must be >= 0");
    require(seg.end_s > seg.start_s, "schedule segments must have end > start");
  }
  const double nyquist = 0.5 / sample_interval_s;
  require(pedestrian.doppler_min_hz > 0.0 && pedestrian.doppler_max_hz < nyquist &&
              pedestrian.doppler_min_hz <= pedestrian.doppler_max_hz,
          "doppler range must lie inside (0, " + format_double(nyquist) + ") Hz");
  require(pedestrian.speed_mean_mps > 0.0, "pedestrian speed must be > 0");
  require(pedestrian.speed_sd_mps >= 0.0, "pedestrian speed sd must be >= 0");
  require(pedestrian.amplitude_mean_db > 0.0, "burst amplitude mean must be > 0");
  require(pedestrian.amplitude_sd_db >= 0.0, "burst amplitude sd must be >= 0");
  require(packet_loss.dropout_rate_per_hour >= 0.0, "dropout rate must be >= 0");
  require(packet_loss.dropout_len_mean_s >= 0.0, "dropout length must be >= 0");
}

std::string CrossingEvent::day_id() const {
  const auto slash = pedestrian_id.rfind('/');
  return slash == std::string::npos ? std::string() : pedestrian_id.substr(0, slash);
}

CountSeries counts_from_events(std::span<const CrossingEvent> events, const std::string& day_id,
                               AreaId area, double duration_s, CountSemantics semantics) {
  const double len = kCountWindowLength;
  const auto n_windows =
      static_cast<std::size_t>(std::floor((duration_s - len) / kCountShift + 1e-9)) + 1;
  std::vector<std::int64_t> distinct(n_windows, 0);
  std::vector<double> occupancy(n_windows, 0.0);
  for (const auto& e : events) {
    if (e.area != area || e.day_id() != day_id) continue;
    // Window k covers [k, k + len) and intersects (t_enter, t_exit) when
    // k > t_enter - len and k < t_exit.
    const double lo = std::floor(e.t_enter - len) + 1.0;
    const double hi = std::ceil(e.t_exit) - 1.0;
    const double k0 = std::max(lo, 0.0);
    const double k1 = std::min(hi, static_cast<double>(n_windows) - 1.0);
    for (double k = k0; k <= k1; k += 1.0) {
      const auto idx = static_cast<std::size_t>(k);
      ++distinct[idx];
      const double overlap = std::min(e.t_exit, k + len) - std::max(e.t_enter, k);
      occupancy[idx] += std::max(0.0, overlap) / len;
    }
  }
  std::vector<CountWindow> windows(n_windows);
  for (std::size_t k = 0; k < n_windows; ++k) {
    windows[k].t_start = static_cast<double>(k) * kCountShift;
    windows[k].count = semantics == CountSemantics::kDistinct
                           ? distinct[k]
                           : static_cast<std::int64_t>(std::llround(occupancy[k]));
  }
  return CountSeries(day_id, area, std::move(windows));
}

DayData generate_day(const ScenarioConfig& config, std::uint64_t day_seed, std::string day_id) {
  config.validate();
  const auto arrivals = draw_arrivals(config, day_seed);
  const auto peds = draw_pedestrians(config, day_seed, arrivals);

  const auto n = static_cast<std::size_t>(
      std::floor(config.duration_s / config.sample_interval_s + 1e-9));
  std::vector<double> times(n);
  for (std::size_t i = 0; i < n; ++i) times[i] = sample_time(i, config.sample_interval_s);
  std::vector<double> signal(n, config.baseline_rsrp_dbm);
  add_shadowing(config, day_seed, signal);
  add_bursts(config, peds, times, signal);
  add_noise(config, day_seed, signal);

  DayData day;
  day.dropouts = draw_dropouts(config, day_seed);
  std::vector<double> kept_t;
  std::vector<double> kept_v;
  kept_t.reserve(n);
  kept_v.reserve(n);
  std::size_t gap = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = times[i];
    while (gap < day.dropouts.size() && day.dropouts[gap].end <= t) ++gap;
    if (gap < day.dropouts.size() && t >= day.dropouts[gap].start) continue;
    kept_t.push_back(t);
    kept_v.push_back(std::round(signal[i] * 1000.0) / 1000.0);
  }
  day.trace = RsrpTrace(day_id, std::move(kept_t), std::move(kept_v), config.sample_interval_s);

  for (std::size_t j = 0; j < peds.size(); ++j) {
    const auto& ped = peds[j];
    const std::string id = day_id + "/" + std::to_string(j + 1);
    for (const auto& a : config.areas) {
      const double half = a.street_length_m / (2.0 * ped.speed);
      day.events.push_back({id, a.spec.area, ped.center_time - half, ped.center_time + half,
                            ped.doppler_hz, ped.amplitude_db});
    }
  }
  for (const auto& a : config.areas) {
    day.counts.push_back(
        counts_from_events(day.events, day_id, a.spec.area, config.duration_s,
                           config.count_semantics));
  }
  return day;
}

std::uint64_t derive_day_seed(std::uint64_t master_seed, int day_index) {
  return splitmix64(master_seed + 0x632BE59BD9B4E019ULL * static_cast<std::uint64_t>(day_index + 1));
}

std::string synth_day_id(int day_index) { return "day" + std::to_string(day_index + 1); }

Campaign generate_campaign(const ScenarioConfig& config, int n_days, std::uint64_t seed) {
  if (n_days < 1) throw Error(ErrorKind::kInvalidArgument, "n_days must be >= 1");
  Campaign campaign;
  campaign.config = config;
  campaign.config.seed = seed;
  campaign.config.validate();
  for (int d = 0; d < n_days; ++d) {
    campaign.days.push_back(generate_day(campaign.config, derive_day_seed(seed, d), synth_day_id(d)));
  }
  return campaign;
}

std::string manifest_csv(std::span<const CrossingEvent> events) {
  std::string out = "pedestrian_id,area_id,t_enter,t_exit,doppler_hz,amplitude_db\n";
  for (const auto& e : events) {
    out += e.pedestrian_id;
    out += ',';
    out += to_string(e.area);
    for (double v : {e.t_enter, e.t_exit, e.doppler_hz, e.amplitude_db}) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::vector<CrossingEvent> load_manifest(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  std::vector<CrossingEvent> events;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (trim(line) != "pedestrian_id,area_id,t_enter,t_exit,doppler_hz,amplitude_db") {
        throw Error(ErrorKind::kParse, path.string() + ":1: unexpected manifest header");
      }
      continue;
    }
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != 6) throw Error(ErrorKind::kParse, where + "expected 6 fields");
    CrossingEvent e;
    e.pedestrian_id = std::string(trim(cells[0]));
    e.area = parse_area(trim(cells[1]));
    double* targets[] = {&e.t_enter, &e.t_exit, &e.doppler_hz, &e.amplitude_db};
    for (int c = 0; c < 4; ++c) {
      const auto v = parse_double(cells[static_cast<std::size_t>(c) + 2]);
      if (!v) throw Error(ErrorKind::kParse, where + "bad number");
      *targets[c] = *v;
    }
    if (!(e.t_exit > e.t_enter)) throw Error(ErrorKind::kParse, where + "t_exit <= t_enter");
    events.push_back(std::move(e));
  }
  if (line_no == 0) throw Error(ErrorKind::kEmpty, path.string() + ": empty manifest");
  return events;
}

std::string scenario_echo(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "[scenario]\n"
      << "duration_s = " << ini_number(config.duration_s) << "\n"
      << "sample_interval_s = " << ini_number(config.sample_interval_s) << "\n"
      << "baseline_rsrp_dbm = " << ini_number(config.baseline_rsrp_dbm) << "\n"
      << "noise_sigma_db = " << ini_number(config.noise_sigma_db) << "\n"
      << "sensing_length_m = " << ini_number(config.sensing_length_m) << "\n"
      << "envelope_ramp_s = " << ini_number(config.envelope_ramp_s) << "\n"
      << "count_semantics = " << to_string(config.count_semantics) << "\n"
      << "seed = " << config.seed << "\n\n"
      << "[shadowing]\n"
      << "sigma_db = " << ini_number(config.shadowing.sigma_db) << "\n"
      << "time_constant_s = " << ini_number(config.shadowing.time_constant_s) << "\n\n"
      << "[pedestrian]\n"
      << "speed_mean_mps = " << ini_number(config.pedestrian.speed_mean_mps) << "\n"
      << "speed_sd_mps = " << ini_number(config.pedestrian.speed_sd_mps) << "\n"
      << "doppler_min_hz = " << ini_number(config.pedestrian.doppler_min_hz) << "\n"
      << "doppler_max_hz = " << ini_number(config.pedestrian.doppler_max_hz) << "\n"
      << "amplitude_mean_db = " << ini_number(config.pedestrian.amplitude_mean_db) << "\n"
      << "amplitude_sd_db = " << ini_number(config.pedestrian.amplitude_sd_db) << "\n\n"
      << "[packet_loss]\n"
      << "dropout_rate_per_hour = " << ini_number(config.packet_loss.dropout_rate_per_hour)
      << "\n"
      << "dropout_len_mean_s = " << ini_number(config.packet_loss.dropout_len_mean_s) << "\n\n"
      << "[schedule]\n"
      << "segments = ";
  for (std::size_t i = 0; i < config.schedule.size(); ++i) {
    const auto& s = config.schedule[i];
    if (i > 0) out << ", ";
    out << ini_number(s.start_s) << ':' << ini_number(s.end_s) << ':' << ini_number(s.rate_per_s);
  }
  out << "\n\n[areas]\n";
  for (const auto& a : config.areas) {
    const std::string name(to_string(a.spec.area));
    out << name << "_m2 = " << ini_number(a.spec.area_m2) << "\n"
        << name << "_lookback_s = " << ini_number(a.spec.effective_lookback_s) << "\n"
        << name << "_street_m = " << ini_number(a.street_length_m) << "\n";
  }
  return out.str();
}

std::vector<std::filesystem::path> write_campaign(const Campaign& campaign,
                                                  const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> written;
  std::vector<CrossingEvent> all_events;
  for (const auto& day : campaign.days) {
    const auto rsrp_path = dir / rsrp_file_name(day.trace.day_id());
    save_rsrp_csv(day.trace, rsrp_path);
    written.push_back(rsrp_path);
    for (const auto& series : day.counts) {
      const auto p = dir / counts_file_name(series.day_id(), series.area());
      save_counts_csv(series, p);
      written.push_back(p);
    }
    all_events.insert(all_events.end(), day.events.begin(), day.events.end());
  }
  const auto manifest_path = dir / kManifestFileName;
  write_file(manifest_path, manifest_csv(all_events));
  written.push_back(manifest_path);
  return written;
}

}  // namespace rsrpflow
