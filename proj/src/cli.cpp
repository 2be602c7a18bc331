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

#include "rsrpflow/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <ctime>
#include <functional>
#include <map>
#include <ostream>

#include "rsrpflow/error.hpp"
#include "rsrpflow/features.hpp"
#include "rsrpflow/gbdt.hpp"
#include "rsrpflow/harness.hpp"
#include "rsrpflow/model_io.hpp"
#include "rsrpflow/svg.hpp"
#include "rsrpflow/synth.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

constexpr std::string_view kLogFileName = "run.log";

struct Flags {
  std::string config;
  std::string data_dir;
  std::string out_dir;
  std::string seed;
  std::string areas;
  std::string dt_grid;
  std::string lookback_k;
  std::string test_day;
  std::string n_days;
  std::string eval_dt;
  std::string correlation;
  std::string attribution;
  bool charts = false;
  std::string bundle;
  std::string area;
  std::string model;
};

RunConfig resolve_config(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    std::string text;
    try {
      text = read_file(f.config);
    } catch (const Error& e) {
      throw Error(ErrorKind::kConfig, e.what());
    }
    apply_ini(c, text);
  }
  // Flags win over the file.
  std::map<std::string, std::string> sections;
  auto set = [&sections](const char* section, const char* key, const std::string& v) {
    if (!v.empty()) sections[section] += std::string(key) + " = " + v + "\n";
  };
  set("paths", "data_dir", f.data_dir);
  set("paths", "out_dir", f.out_dir);
  set("run", "seed", f.seed);
  set("run", "areas", f.areas);
  set("features", "dt_grid", f.dt_grid);
  set("run", "lookback_k", f.lookback_k);
  set("run", "test_day", f.test_day);
  set("run", "n_days", f.n_days);
  set("run", "eval_dt", f.eval_dt);
  set("run", "correlation", f.correlation);
  set("run", "attribution", f.attribution);
  if (f.charts) set("run", "charts", "true");
  std::string overrides;
  for (const auto& [name, body] : sections) overrides += "[" + name + "]\n" + body;
  if (!overrides.empty()) apply_ini(c, overrides);
  if (!f.seed.empty()) {
    // --seed drives both the generator and the trees.
    c.scenario.seed = c.run.seed;
    c.gbdt.seed = c.run.seed;
  }
  c.validate();
  return c;
}

std::string data_source(const RunConfig& c) {
  return std::filesystem::exists(c.data_dir / kManifestFileName) ? "synthetic" : "field";
}

Dataset load_data(const RunConfig& c) {
  return load_dataset(c.data_dir, c.run.areas);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_outputs(const RunConfig& c, const Bundle& files, std::ostream& out) {
  ensure_dir(c.out_dir);
  for (const auto& f : files) {
    write_file(c.out_dir / f.name, f.content);
    out << (c.out_dir / f.name).string() << "\n";
  }
}

void print_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const auto& w : warnings) err << "warning: " << w << "\n";
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  return s;
}

}  // namespace

std::vector<std::filesystem::path> cmd_synth(const RunConfig& config) {
  const Campaign campaign = generate_campaign(config.scenario, config.run.n_days, config.run.seed);
  ensure_dir(config.data_dir);
  return write_campaign(campaign, config.data_dir);
}

Bundle cmd_run_all(const RunConfig& config, const FitObserver& observer) {
  const Dataset data = load_data(config);
  ExperimentOptions options = config.experiment_options();
  options.fit_observer = observer;
  const EvalReport report = run_all(data, options);
  const Bundle bundle = make_bundle(report, config, data_source(config));
  write_bundle(bundle, config.out_dir);
  if (config.run.charts) write_charts(config.out_dir);
  return bundle;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"rsrpflow: pedestrian counting from cellular RSRP variance"};
  app.name("rsrpflow");
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "INI run configuration");
  app.add_option("--data-dir", f.data_dir, "directory of rsrp_*/counts_* CSVs");
  app.add_option("--out-dir", f.out_dir, "output directory");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--areas", f.areas, "comma separated areas, e.g. small,large");
  app.add_option("--dt-grid", f.dt_grid, "comma separated variance windows in seconds");
  app.add_option("--lookback-k", f.lookback_k, "look-back intervals for the lookback experiment");
  app.add_option("--test-day", f.test_day, "evaluate a single held-out day");

  std::function<void()> action;
  auto sub = [&](const char* name, const char* help, std::function<void()> fn) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    s->callback([&action, fn] { action = fn; });
    return s;
  };

  CLI::App* synth = sub("synth", "generate a synthetic campaign into --data-dir", [&] {
    const auto c = resolve_config(f);
    const auto files = cmd_synth(c);
    for (const auto& p : files) out << p.string() << "\n";
  });
  synth->add_option("--n-days", f.n_days, "number of days");

  sub("features", "write feature tables, one per area", [&] {
    const auto c = resolve_config(f);
    const Dataset data = load_data(c);
    ensure_dir(c.out_dir);
    for (const auto& area : c.selected_areas()) {
      FeatureSpec spec = c.features;
      spec.lookback_intervals = c.run.lookback_k;
      const auto counts = data.counts_for(area.area);
      const auto table = build_table(data.traces, counts, spec, area);
      const auto p = c.out_dir / ("features_" + std::string(to_string(area.area)) + ".csv");
      save_feature_table_csv(table, p);
      out << p.string() << "\n";
    }
  });

  CLI::App* correlate = sub("correlate", "Spearman correlation per variance window", [&] {
    const auto c = resolve_config(f);
    const Dataset data = load_data(c);
    const auto o = c.experiment_options();
    const auto rows = exp_correlation(data, make_bank(data, o), o);
    write_outputs(c, {{"correlation.csv", sweep_csv(rows, "rho")}}, out);
  });
  correlate->add_option("--correlation", f.correlation, "tie_corrected or eq1");

  sub("rmse-sweep", "single-window models, test RMSE per variance window", [&] {
    const auto c = resolve_config(f);
    const Dataset data = load_data(c);
    const auto o = c.experiment_options();
    const auto rows = exp_rmse_sweep(data, make_bank(data, o), o);
    write_outputs(c, {{"rmse_sweep.csv", sweep_csv(rows, "rmse")}}, out);
  });

  CLI::App* shap = sub("shap-windows", "joint model, mean |SHAP| per variance window", [&] {
    const auto c = resolve_config(f);
    const Dataset data = load_data(c);
    const auto o = c.experiment_options();
    const auto rows = exp_shap_windows(data, make_bank(data, o), o);
    write_outputs(c, {{"shap_windows.csv", sweep_csv(rows, "mean_abs_shap")}}, out);
  });
  shap->add_option("--attribution", f.attribution, "test or train");

  CLI::App* lookback = sub("lookback", "mean |SHAP| per look-back interval", [&] {
    const auto c = resolve_config(f);
    const Dataset data = load_data(c);
    const auto o = c.experiment_options();
    const auto rows = exp_lookback(data, make_bank(data, o), o);
    write_outputs(c, {{"lookback.csv", lookback_csv(rows)}}, out);
  });
  lookback->add_option("--eval-dt", f.eval_dt, "variance window in seconds");
  lookback->add_option("--attribution", f.attribution, "test or train");

  CLI::App* evaluate = sub("evaluate", "per-area evaluation with effective look-back", [&] {
    const auto c = resolve_config(f);
    const Dataset data = load_data(c);
    const auto o = c.experiment_options();
    std::vector<std::string> warnings;
    const auto evals = exp_eval(data, make_bank(data, o), o, &warnings);
    print_warnings(warnings, err);
    Bundle files;
    for (const auto& e : evals) {
      const std::string a(to_string(e.area.area));
      files.push_back({"eval_" + a + ".csv", eval_csv(e)});
      files.push_back({"ecdf_" + a + "_inclass.csv", ecdf_csv(e, true)});
      files.push_back({"ecdf_" + a + "_noclass.csv", ecdf_csv(e, false)});
      files.push_back({"boxplot_" + a + ".csv", boxplot_csv(e)});
      for (const auto& d : e.days) {
        files.push_back({"timeseries_" + a + "_" + d.day + ".csv", timeseries_csv(d)});
      }
    }
    write_outputs(c, files, out);
  });
  evaluate->add_option("--eval-dt", f.eval_dt, "variance window in seconds");

  CLI::App* run_all_cmd = sub("run-all", "all experiments, writes a report bundle", [&] {
    const auto c = resolve_config(f);
    ensure_dir(c.out_dir);
    const std::string started = timestamp();
    const auto t0 = std::chrono::steady_clock::now();
    const Bundle bundle = cmd_run_all(c);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_file(c.out_dir / kLogFileName, "started " + started + "\nfinished " + timestamp() +
                                             "\nelapsed_s " + format_double(secs) + "\n");
    const auto manifest = load_run_manifest(c.out_dir);
    for (const auto& [k, v] : manifest) {
      if (k.rfind("warning.", 0) == 0) err << "warning: " << v << "\n";
    }
    out << "bundle " << c.out_dir.string() << " files " << bundle.size() << " checksum "
        << directory_checksum(c.out_dir) << "\n";
  });
  run_all_cmd->add_option("--eval-dt", f.eval_dt, "variance window in seconds");
  run_all_cmd->add_option("--correlation", f.correlation, "tie_corrected or eq1");
  run_all_cmd->add_option("--attribution", f.attribution, "test or train");
  run_all_cmd->add_flag("--charts", f.charts, "also write SVG charts");

  CLI::App* compare = sub("compare-paper", "obtained vs published values", [&] {
    std::filesystem::path dir = f.bundle;
    if (dir.empty()) dir = resolve_config(f).out_dir;
    out << format_comparison(compare_with_published(dir));
  });
  compare->add_option("--bundle", f.bundle, "report bundle directory (default --out-dir)");

  CLI::App* train = sub("train", "fit one area's evaluation model on all days", [&] {
    const auto c = resolve_config(f);
    const AreaId area = parse_area(f.area.empty() ? "small" : f.area);
    RunConfig one = c;
    one.run.areas = {area};
    const Dataset data = load_data(one);
    const auto o = one.experiment_options();
    const AreaSpec& spec = o.areas.front();
    FeatureSpec fs = o.spec;
    fs.dt_grid = {o.eval_dt};
    fs.lookback_intervals = spec.lookback_intervals();
    const auto counts = data.counts_for(area);
    const auto table = build_table(data.traces, counts, fs, spec).complete_only();
    const GbdtModel model = fit(table, o.params);
    std::filesystem::path p = f.model;
    if (p.empty()) {
      ensure_dir(c.out_dir);
      p = c.out_dir / ("model_" + std::string(to_string(area)) + ".json");
    }
    save_model(model, p);
    out << p.string() << "\n";
  });
  train->add_option("--area", f.area, "small, medium or large");
  train->add_option("--model", f.model, "output path");
  train->add_option("--eval-dt", f.eval_dt, "variance window in seconds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return 2;
  }
  try {
    if (action) action();
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rsrpflow
