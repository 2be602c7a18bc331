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

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

using Setter = std::function<void(RunConfig&, std::string_view)>;

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(ErrorKind::kConfig,
              "invalid value '" + std::string(value) + "' for " + std::string(key));
}

double to_double(std::string_view key, std::string_view value) {
  const auto v = parse_double(value);
  if (!v) bad_value(key, value);
  return *v;
}

int to_int(std::string_view key, std::string_view value) {
  const auto v = parse_int(value);
  if (!v || *v < std::numeric_limits<int>::min() || *v > std::numeric_limits<int>::max()) {
    bad_value(key, value);
  }
  return static_cast<int>(*v);
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
  const auto v = parse_int(value);
  if (!v || *v < 0) bad_value(key, value);
  return static_cast<std::uint64_t>(*v);
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

StreetArea& street_area(RunConfig& c, AreaId area) {
  for (auto& a : c.scenario.areas) {
    if (a.spec.area == area) return a;
  }
  StreetArea added;
  added.spec.area = area;
  c.scenario.areas.push_back(added);
  return c.scenario.areas.back();
}

std::vector<RateSegment> parse_segments(std::string_view text) {
  std::vector<RateSegment> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto parts = split(item, ':');
    if (parts.size() != 3) bad_value("[schedule] segments", item);
    RateSegment seg;
    seg.start_s = to_double("[schedule] segments", trim(parts[0]));
    seg.end_s = to_double("[schedule] segments", trim(parts[1]));
    seg.rate_per_s = to_double("[schedule] segments", trim(parts[2]));
    out.push_back(seg);
  }
  return out;
}

std::string format_minutes(int minutes) {
  std::string h = std::to_string(minutes / 60);
  std::string m = std::to_string(minutes % 60);
  if (h.size() < 2) h = "0" + h;
  if (m.size() < 2) m = "0" + m;
  return h + ":" + m;
}

int parse_minutes(std::string_view key, std::string_view text) {
  // Reuse the period parser on a zero-length period.
  const std::string period = std::string(text) + "-" + std::string(text);
  try {
    return parse_clock_period(period).start_min;
  } catch (const Error&) {
    bad_value(key, text);
  }
}

const std::map<std::string, std::map<std::string, Setter>>& setters() {
  static const std::map<std::string, std::map<std::string, Setter>> table = [] {
    std::map<std::string, std::map<std::string, Setter>> t;
    t["paths"]["data_dir"] = [](RunConfig& c, std::string_view v) { c.data_dir = std::string(v); };
    t["paths"]["out_dir"] = [](RunConfig& c, std::string_view v) { c.out_dir = std::string(v); };

    t["features"]["dt_grid"] = [](RunConfig& c, std::string_view v) {
      c.features.dt_grid = parse_number_list(v);
    };
    t["features"]["agg_len_s"] = [](RunConfig& c, std::string_view v) {
      c.features.agg_len = to_double("[features] agg_len_s", v);
    };
    t["features"]["shift_s"] = [](RunConfig& c, std::string_view v) {
      c.features.shift = to_double("[features] shift_s", v);
    };
    t["features"]["min_coverage"] = [](RunConfig& c, std::string_view v) {
      c.features.min_coverage = to_double("[features] min_coverage", v);
    };
    t["features"]["lookback_anchor"] = [](RunConfig& c, std::string_view v) {
      c.features.anchor = parse_anchor(v);
    };

    t["gbdt"]["n_trees"] = [](RunConfig& c, std::string_view v) {
      c.gbdt.n_trees = to_int("[gbdt] n_trees", v);
    };
    t["gbdt"]["max_depth"] = [](RunConfig& c, std::string_view v) {
      c.gbdt.max_depth = to_int("[gbdt] max_depth", v);
    };
    t["gbdt"]["learning_rate"] = [](RunConfig& c, std::string_view v) {
      c.gbdt.learning_rate = to_double("[gbdt] learning_rate", v);
    };
    t["gbdt"]["min_samples_leaf"] = [](RunConfig& c, std::string_view v) {
      c.gbdt.min_samples_leaf = to_int("[gbdt] min_samples_leaf", v);
    };
    t["gbdt"]["seed"] = [](RunConfig& c, std::string_view v) { c.gbdt.seed = to_u64("[gbdt] seed", v); };

    t["run"]["seed"] = [](RunConfig& c, std::string_view v) { c.run.seed = to_u64("[run] seed", v); };
    t["run"]["n_days"] = [](RunConfig& c, std::string_view v) { c.run.n_days = to_int("[run] n_days", v); };
    t["run"]["eval_dt"] = [](RunConfig& c, std::string_view v) {
      c.run.eval_dt = to_double("[run] eval_dt", v);
    };
    t["run"]["lookback_k"] = [](RunConfig& c, std::string_view v) {
      c.run.lookback_k = to_int("[run] lookback_k", v);
    };
    t["run"]["correlation"] = [](RunConfig& c, std::string_view v) {
      c.run.correlation = parse_correlation_method(v);
    };
    t["run"]["attribution"] = [](RunConfig& c, std::string_view v) {
      if (v == "test") {
        c.run.train_side_attribution = false;
      } else if (v == "train") {
        c.run.train_side_attribution = true;
      } else {
        bad_value("[run] attribution", v);
      }
    };
    t["run"]["charts"] = [](RunConfig& c, std::string_view v) { c.run.charts = to_bool("[run] charts", v); };
    t["run"]["areas"] = [](RunConfig& c, std::string_view v) { c.run.areas = parse_area_list(v); };
    t["run"]["test_day"] = [](RunConfig& c, std::string_view v) {
      if (v.empty()) {
        c.run.test_day.reset();
      } else {
        c.run.test_day = std::string(v);
      }
    };

    t["classes"]["day_start"] = [](RunConfig& c, std::string_view v) {
      c.schedule.day_start_min = parse_minutes("[classes] day_start", v);
    };
    t["classes"]["day_end"] = [](RunConfig& c, std::string_view v) {
      c.schedule.day_end_min = parse_minutes("[classes] day_end", v);
    };
    t["classes"]["no_class"] = [](RunConfig& c, std::string_view v) {
      c.schedule.no_class_periods.clear();
      for (auto item : split(v, ',')) {
        item = trim(item);
        if (!item.empty()) c.schedule.no_class_periods.push_back(parse_clock_period(item));
      }
    };

    for (AreaId area : kAllAreas) {
      const std::string name(to_string(area));
      t["areas"][name + "_m2"] = [area, name](RunConfig& c, std::string_view v) {
        street_area(c, area).spec.area_m2 = to_double("[areas] " + name + "_m2", v);
      };
      t["areas"][name + "_lookback_s"] = [area, name](RunConfig& c, std::string_view v) {
        street_area(c, area).spec.effective_lookback_s = to_double("[areas] " + name + "_lookback_s", v);
      };
      t["areas"][name + "_street_m"] = [area, name](RunConfig& c, std::string_view v) {
        street_area(c, area).street_length_m = to_double("[areas] " + name + "_street_m", v);
      };
    }

    auto& sc = t["scenario"];
    sc["duration_s"] = [](RunConfig& c, std::string_view v) {
      c.scenario.duration_s = to_double("[scenario] duration_s", v);
    };
    sc["sample_interval_s"] = [](RunConfig& c, std::string_view v) {
      c.scenario.sample_interval_s = to_double("[scenario] sample_interval_s", v);
    };
    sc["baseline_rsrp_dbm"] = [](RunConfig& c, std::string_view v) {
      c.scenario.baseline_rsrp_dbm = to_double("[scenario] baseline_rsrp_dbm", v);
    };
    sc["noise_sigma_db"] = [](RunConfig& c, std::string_view v) {
      c.scenario.noise_sigma_db = to_double("[scenario] noise_sigma_db", v);
    };
    sc["sensing_length_m"] = [](RunConfig& c, std::string_view v) {
      c.scenario.sensing_length_m = to_double("[scenario] sensing_length_m", v);
    };
    sc["envelope_ramp_s"] = [](RunConfig& c, std::string_view v) {
      c.scenario.envelope_ramp_s = to_double("[scenario] envelope_ramp_s", v);
    };
    sc["count_semantics"] = [](RunConfig& c, std::string_view v) {
      c.scenario.count_semantics = parse_count_semantics(v);
    };
    sc["seed"] = [](RunConfig& c, std::string_view v) {
      c.scenario.seed = to_u64("[scenario] seed", v);
    };

    t["shadowing"]["sigma_db"] = [](RunConfig& c, std::string_view v) {
      c.scenario.shadowing.sigma_db = to_double("[shadowing] sigma_db", v);
    };
    t["shadowing"]["time_constant_s"] = [](RunConfig& c, std::string_view v) {
      c.scenario.shadowing.time_constant_s = to_double("[shadowing] time_constant_s", v);
    };
    // Alternative to time_constant_s: the per-sample AR(1) coefficient.
    t["shadowing"]["ar1_coefficient"] = [](RunConfig& c, std::string_view v) {
      const double a = to_double("[shadowing] ar1_coefficient", v);
      if (!(a > 0.0 && a < 1.0)) bad_value("[shadowing] ar1_coefficient", v);
      c.scenario.shadowing.time_constant_s = -c.scenario.sample_interval_s / std::log(a);
    };

    auto& pd = t["pedestrian"];
    pd["speed_mean_mps"] = [](RunConfig& c, std::string_view v) {
      c.scenario.pedestrian.speed_mean_mps = to_double("[pedestrian] speed_mean_mps", v);
    };
    pd["speed_sd_mps"] = [](RunConfig& c, std::string_view v) {
      c.scenario.pedestrian.speed_sd_mps = to_double("[pedestrian] speed_sd_mps", v);
    };
    pd["doppler_min_hz"] = [](RunConfig& c, std::string_view v) {
      c.scenario.pedestrian.doppler_min_hz = to_double("[pedestrian] doppler_min_hz", v);
    };
    pd["doppler_max_hz"] = [](RunConfig& c, std::string_view v) {
      c.scenario.pedestrian.doppler_max_hz = to_double("[pedestrian] doppler_max_hz", v);
    };
    pd["amplitude_mean_db"] = [](RunConfig& c, std::string_view v) {
      c.scenario.pedestrian.amplitude_mean_db = to_double("[pedestrian] amplitude_mean_db", v);
    };
    pd["amplitude_sd_db"] = [](RunConfig& c, std::string_view v) {
      c.scenario.pedestrian.amplitude_sd_db = to_double("[pedestrian] amplitude_sd_db", v);
    };

    t["packet_loss"]["dropout_rate_per_hour"] = [](RunConfig& c, std::string_view v) {
      c.scenario.packet_loss.dropout_rate_per_hour =
          to_double("[packet_loss] dropout_rate_per_hour", v);
    };
    t["packet_loss"]["dropout_len_mean_s"] = [](RunConfig& c, std::string_view v) {
      c.scenario.packet_loss.dropout_len_mean_s = to_double("[packet_loss] dropout_len_mean_s", v);
    };

    t["schedule"]["segments"] = [](RunConfig& c, std::string_view v) {
      c.scenario.schedule = parse_segments(v);
    };
    return t;
  }();
  return table;
}

}  // namespace

std::string_view to_string(CorrelationMethod method) {
  return method == CorrelationMethod::kEq1 ? "eq1" : "tie_corrected";
}

CorrelationMethod parse_correlation_method(std::string_view text) {
  if (text == "eq1") return CorrelationMethod::kEq1;
  if (text == "tie_corrected") return CorrelationMethod::kTieCorrected;
  throw Error(ErrorKind::kConfig, "unknown correlation method '" + std::string(text) + "'");
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto v = parse_double(item);
    if (!v) throw Error(ErrorKind::kConfig, "bad number '" + std::string(item) + "' in list");
    out.push_back(*v);
  }
  if (out.empty()) throw Error(ErrorKind::kConfig, "empty number list");
  return out;
}

std::vector<AreaId> parse_area_list(std::string_view text) {
  std::vector<AreaId> out;
  for (auto item : split(text, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(parse_area(item));
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, e.what());
    }
  }
  if (out.empty()) throw Error(ErrorKind::kConfig, "empty area list");
  return out;
}

void apply_ini(RunConfig& config, std::string_view ini_text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in{std::string(ini_text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::kConfig, "line " + std::to_string(e.line()) + ": " + e.message());
  }
  const auto& table = setters();
  for (const auto& [section, keys] : tree) {
    const auto sec = table.find(section);
    if (sec == table.end()) throw Error(ErrorKind::kConfig, "unknown section [" + section + "]");
    if (keys.empty() && !keys.data().empty()) {
      throw Error(ErrorKind::kConfig, "key '" + section + "' outside any section");
    }
    for (const auto& [key, value] : keys) {
      const auto setter = sec->second.find(key);
      if (setter == sec->second.end()) {
        throw Error(ErrorKind::kConfig, "unknown key '" + key + "' in [" + section + "]");
      }
      setter->second(config, trim(value.data()));
    }
  }
}

RunConfig parse_run_config(std::string_view ini_text) {
  RunConfig config;
  apply_ini(config, ini_text);
  config.validate();
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  try {
    return parse_run_config(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void RunConfig::validate() const {
  try {
    features.validate();
    gbdt.validate();
    scenario.validate();
    schedule.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::kConfig, e.what());
  }
  if (run.n_days < 1) throw Error(ErrorKind::kConfig, "[run] n_days must be >= 1");
  if (run.lookback_k < 1) throw Error(ErrorKind::kConfig, "[run] lookback_k must be >= 1");
  if (!(run.eval_dt > 0.0 && run.eval_dt <= features.agg_len)) {
    throw Error(ErrorKind::kConfig, "[run] eval_dt must lie in (0, agg_len_s]");
  }
  for (AreaId a : run.areas) {
    bool found = false;
    for (const auto& s : scenario.areas) found = found || s.spec.area == a;
    if (!found) {
      throw Error(ErrorKind::kConfig, "area '" + std::string(to_string(a)) + "' has no [areas] entry");
    }
  }
}

std::vector<AreaSpec> RunConfig::selected_areas() const {
  std::vector<AreaSpec> out;
  for (AreaId a : run.areas) {
    for (const auto& s : scenario.areas) {
      if (s.spec.area == a) out.push_back(s.spec);
    }
  }
  return out;
}

ExperimentOptions RunConfig::experiment_options() const {
  ExperimentOptions o;
  o.spec = features;
  o.params = gbdt;
  o.areas = selected_areas();
  o.correlation = run.correlation;
  o.eval_dt = run.eval_dt;
  o.lookback_k = run.lookback_k;
  o.train_side_attribution = run.train_side_attribution;
  o.test_day = run.test_day;
  o.schedule = schedule;
  return o;
}

std::string RunConfig::to_ini() const {
  std::ostringstream out;
  out << "[paths]\n"
      << "data_dir = " << data_dir.string() << "\n"
      << "out_dir = " << out_dir.string() << "\n\n"
      << "[features]\n"
      << "dt_grid = ";
  for (std::size_t i = 0; i < features.dt_grid.size(); ++i) {
    out << (i ? ", " : "") << format_double(features.dt_grid[i]);
  }
  out << "\n"
      << "agg_len_s = " << format_double(features.agg_len) << "\n"
      << "shift_s = " << format_double(features.shift) << "\n"
      << "min_coverage = " << format_double(features.min_coverage) << "\n"
      << "lookback_anchor = " << to_string(features.anchor) << "\n\n"
      << "[gbdt]\n"
      << "n_trees = " << gbdt.n_trees << "\n"
      << "max_depth = " << gbdt.max_depth << "\n"
      << "learning_rate = " << format_double(gbdt.learning_rate) << "\n"
      << "min_samples_leaf = " << gbdt.min_samples_leaf << "\n"
      << "seed = " << gbdt.seed << "\n\n"
      << "[run]\n"
      << "seed = " << run.seed << "\n"
      << "n_days = " << run.n_days << "\n"
      << "eval_dt = " << format_double(run.eval_dt) << "\n"
      << "lookback_k = " << run.lookback_k << "\n"
      << "correlation = " << to_string(run.correlation) << "\n"
      << "attribution = " << (run.train_side_attribution ? "train" : "test") << "\n"
      << "charts = " << (run.charts ? "true" : "false") << "\n"
      << "areas = ";
  for (std::size_t i = 0; i < run.areas.size(); ++i) {
    out << (i ? "," : "") << to_string(run.areas[i]);
  }
  out << "\n"
      << "test_day = " << run.test_day.value_or("") << "\n\n"
      << "[classes]\n"
      << "day_start = " << format_minutes(schedule.day_start_min) << "\n"
      << "day_end = " << format_minutes(schedule.day_end_min) << "\n"
      << "no_class = ";
  for (std::size_t i = 0; i < schedule.no_class_periods.size(); ++i) {
    out << (i ? ", " : "") << format_clock_period(schedule.no_class_periods[i]);
  }
  out << "\n\n" << scenario_echo(scenario);
  return out.str();
}

}  // namespace rsrpflow
