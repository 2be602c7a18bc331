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

#include "rsrpflow/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string area_name(AreaId a) { return std::string(to_string(a)); }

// Flattens "[section]\nkey = value" text into config.<section>.<key> entries.
std::vector<std::pair<std::string, std::string>> flatten_ini(std::string_view ini) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string section;
  for (auto line : split(ini, '\n')) {
    line = trim(line);
    if (line.empty() || line.front() == ';' || line.front() == '#') continue;
    if (line.front() == '[' && line.back() == ']') {
      section = std::string(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) continue;
    out.emplace_back("config." + section + "." + std::string(trim(line.substr(0, eq))),
                     std::string(trim(line.substr(eq + 1))));
  }
  return out;
}

std::optional<double> ecdf_at(const CsvTable& t, double x) {
  const auto day = t.column("day");
  const auto thr = t.column("threshold");
  const auto frac = t.column("fraction");
  bool any = false;
  double value = 0.0;
  for (const auto& row : t.rows) {
    if (row[day] != "all") continue;
    any = true;
    const auto th = parse_double(row[thr]);
    const auto f = parse_double(row[frac]);
    if (th && f && *th <= x + 1e-9) value = *f;
  }
  if (!any) return std::nullopt;
  return value;
}

CsvTable require_table(const std::filesystem::path& dir, const std::string& name) {
  const auto path = dir / name;
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorKind::kIo, "bundle missing required table: " + path.string());
  }
  return read_csv_table(path);
}

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << v;
  return s.str();
}

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows, std::string_view value_column) {
  std::string out = "area,day,dt," + std::string(value_column) + ",n_rows,n_excluded\n";
  for (const auto& r : rows) {
    out += area_name(r.area) + "," + csv_field(r.day) + "," + format_decimal(r.dt) + "," +
           opt(r.value) + "," + std::to_string(r.n_rows) + "," + std::to_string(r.n_excluded) +
           "\n";
  }
  return out;
}

std::string lookback_csv(const std::vector<LookbackRow>& rows) {
  std::string out = "area,day,lookback,mean_abs_shap,n_rows,n_excluded\n";
  for (const auto& r : rows) {
    out += area_name(r.area) + "," + csv_field(r.day) + "," + std::to_string(r.lookback) + "," +
           opt(r.value) + "," + std::to_string(r.n_rows) + "," + std::to_string(r.n_excluded) +
           "\n";
  }
  return out;
}

std::string eval_csv(const AreaEval& eval) {
  std::string out = "day,dt,lookback_intervals,rmse,baseline_rmse,n_rows,n_excluded\n";
  const std::string dt = format_decimal(eval.dt);
  const std::string k = std::to_string(eval.lookback_intervals);
  std::size_t rows = 0;
  std::size_t excluded = 0;
  for (const auto& d : eval.days) {
    out += csv_field(d.day) + "," + dt + "," + k + "," + format_double(d.rmse) + "," +
           format_double(d.baseline_rmse) + "," + std::to_string(d.n_rows) + "," +
           std::to_string(d.n_excluded) + "\n";
    rows += d.n_rows;
    excluded += d.n_excluded;
  }
  out += std::string(kMeanDay) + "," + dt + "," + k + "," + format_double(eval.mean_rmse) + "," +
         format_double(eval.mean_baseline_rmse) + "," + std::to_string(rows) + "," +
         std::to_string(excluded) + "\n";
  return out;
}

std::string ecdf_csv(const AreaEval& eval, bool in_class) {
  std::string out = "day,threshold,fraction\n";
  for (const auto& d : eval.days) {
    for (const auto& p : eval_ecdf(d, in_class)) {
      out += csv_field(d.day) + "," + format_double(p.threshold) + "," +
             format_double(p.fraction) + "\n";
    }
  }
  for (const auto& p : eval_ecdf(eval, in_class)) {
    out += "all," + format_double(p.threshold) + "," + format_double(p.fraction) + "\n";
  }
  return out;
}

std::string timeseries_csv(const DayEval& day) {
  std::string out = "t_label,truth,pred,abs_error,in_class\n";
  for (const auto& p : day.series) {
    out += format_double(p.t_label) + "," + format_double(p.truth) + "," + opt(p.pred) + ",";
    if (p.pred) out += format_double(std::abs(*p.pred - p.truth));
    out += p.in_class ? ",1\n" : ",0\n";
  }
  return out;
}

std::string boxplot_csv(const AreaEval& eval) {
  std::string out = "count,n,min,q1,median,q3,max,outliers\n";
  for (const auto& b : eval_boxplot(eval)) {
    std::string outliers;
    for (std::size_t i = 0; i < b.outliers.size(); ++i) {
      if (i) outliers += ';';
      outliers += format_double(b.outliers[i]);
    }
    out += std::to_string(b.group_key) + "," + std::to_string(b.n) + "," + format_double(b.min) +
           "," + format_double(b.q1) + "," + format_double(b.median) + "," +
           format_double(b.q3) + "," + format_double(b.max) + "," + outliers + "\n";
  }
  return out;
}

Bundle make_bundle(const EvalReport& report, const RunConfig& config,
                   std::string_view data_source) {
  Bundle files;
  files.push_back({"correlation.csv", sweep_csv(report.correlation, "rho")});
  files.push_back({"rmse_sweep.csv", sweep_csv(report.rmse_sweep, "rmse")});
  files.push_back({"shap_windows.csv", sweep_csv(report.shap_windows, "mean_abs_shap")});
  files.push_back({"lookback.csv", lookback_csv(report.lookback)});
  for (const auto& e : report.eval) {
    const std::string a = area_name(e.area.area);
    files.push_back({"eval_" + a + ".csv", eval_csv(e)});
    files.push_back({"ecdf_" + a + "_inclass.csv", ecdf_csv(e, true)});
    files.push_back({"ecdf_" + a + "_noclass.csv", ecdf_csv(e, false)});
    files.push_back({"boxplot_" + a + ".csv", boxplot_csv(e)});
    for (const auto& d : e.days) {
      files.push_back({"timeseries_" + a + "_" + d.day + ".csv", timeseries_csv(d)});
    }
  }
  std::sort(files.begin(), files.end(),
            [](const BundleFile& x, const BundleFile& y) { return x.name < y.name; });

  std::string m = "key,value\n";
  auto add = [&m](const std::string& k, std::string_view v) {
    m += csv_field(k) + "," + csv_field(v) + "\n";
  };
  add("schema", "rsrpflow.run_manifest");
  add("version", "1");
  add("data_source", data_source);
  add("dataset_fingerprint", report.dataset_fingerprint);
  add("spec_fingerprint", report.spec_fingerprint);
  add("params_fingerprint", report.params_fingerprint);
  // Paths are left out so a bundle does not depend on where it was written.
  for (const auto& [k, v] : flatten_ini(config.to_ini())) {
    if (k.rfind("config.paths.", 0) != 0) add(k, v);
  }
  for (std::size_t i = 0; i < report.warnings.size(); ++i) {
    add("warning." + std::to_string(i + 1), report.warnings[i]);
  }
  for (const auto& f : files) {
    Fnv1a h;
    h.update(f.content);
    add("file." + f.name, h.hex());
  }
  files.push_back({std::string(kRunManifestFileName), m});
  return files;
}

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create " + dir.string() + ": " + ec.message());
  for (const auto& f : bundle) write_file(dir / f.name, f.content);
}

std::string bundle_checksum(const Bundle& bundle) {
  std::vector<const BundleFile*> sorted;
  for (const auto& f : bundle) sorted.push_back(&f);
  std::sort(sorted.begin(), sorted.end(),
            [](const BundleFile* x, const BundleFile* y) { return x->name < y->name; });
  Fnv1a h;
  for (const auto* p : sorted) {
    const auto& f = *p;
    h.update(f.name);
    h.update(std::uint64_t{f.content.size()});
    h.update(f.content);
  }
  return h.hex();
}

std::string directory_checksum(const std::filesystem::path& dir) {
  Bundle files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext != ".csv" && ext != ".svg") continue;
    files.push_back({entry.path().filename().string(), read_file(entry.path())});
  }
  std::sort(files.begin(), files.end(),
            [](const BundleFile& x, const BundleFile& y) { return x.name < y.name; });
  return bundle_checksum(files);
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw Error(ErrorKind::kParse, "missing column '" + std::string(name) + "'");
}

CsvTable parse_csv_table(std::string_view text) {
  CsvTable table;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool any = false;
  std::size_t line = 1;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    if (table.header.empty()) {
      table.header = std::move(record);
    } else {
      if (record.size() != table.header.size()) {
        throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": expected " +
                                           std::to_string(table.header.size()) + " fields, got " +
                                           std::to_string(record.size()));
      }
      table.rows.push_back(std::move(record));
    }
    record.clear();
    any = false;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      record.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\n') {
      if (any || !field.empty() || !record.empty()) end_record();
      ++line;
    } else if (c != '\r') {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error(ErrorKind::kParse, "unterminated quote");
  if (any || !field.empty() || !record.empty()) end_record();
  if (table.header.empty()) throw Error(ErrorKind::kEmpty, "empty CSV");
  return table;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  try {
    return parse_csv_table(read_file(path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kIo) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::map<std::string, std::string> load_run_manifest(const std::filesystem::path& dir) {
  const auto t = require_table(dir, std::string(kRunManifestFileName));
  const auto k = t.column("key");
  const auto v = t.column("value");
  std::map<std::string, std::string> out;
  for (const auto& row : t.rows) out[row[k]] = row[v];
  return out;
}

ComparisonTable compare_with_published(const std::filesystem::path& bundle_dir) {
  const auto manifest = load_run_manifest(bundle_dir);
  ComparisonTable table;
  const auto src = manifest.find("data_source");
  table.synthetic = src == manifest.end() || src->second != "field";

  std::vector<AreaId> areas(kAllAreas.begin(), kAllAreas.end());
  if (const auto it = manifest.find("config.run.areas"); it != manifest.end()) {
    areas = parse_area_list(it->second);
  }

  const auto corr = require_table(bundle_dir, "correlation.csv");
  std::vector<CsvTable> evals;
  std::vector<CsvTable> inclass;
  std::vector<CsvTable> noclass;
  for (AreaId a : areas) {
    const std::string n = area_name(a);
    evals.push_back(require_table(bundle_dir, "eval_" + n + ".csv"));
    inclass.push_back(require_table(bundle_dir, "ecdf_" + n + "_inclass.csv"));
    noclass.push_back(require_table(bundle_dir, "ecdf_" + n + "_noclass.csv"));
  }

  const std::string range = fixed(kPublishedRhoMin, 2) + "-" + fixed(kPublishedRhoMax, 2);
  for (AreaId a : areas) {
    std::optional<double> lo;
    std::optional<double> hi;
    const auto ca = corr.column("area");
    const auto cd = corr.column("day");
    const auto cv = corr.column("rho");
    for (const auto& row : corr.rows) {
      if (row[ca] != to_string(a) || row[cd] != kMeanDay) continue;
      const auto v = parse_double(row[cv]);
      if (!v) continue;
      lo = lo ? std::min(*lo, *v) : *v;
      hi = hi ? std::max(*hi, *v) : *v;
    }
    table.rows.push_back({"mean spearman rho over dt grid", area_name(a), range,
                          lo ? fixed(*lo, 2) + "-" + fixed(*hi, 2) : "n/a"});
  }
  for (std::size_t i = 0; i < areas.size(); ++i) {
    const double published = areas[i] == AreaId::kSmall    ? kPublishedRmseSmall
                             : areas[i] == AreaId::kMedium ? kPublishedRmseMedium
                                                           : kPublishedRmseLarge;
    std::string obtained = "n/a";
    const auto d = evals[i].column("day");
    const auto r = evals[i].column("rmse");
    for (const auto& row : evals[i].rows) {
      if (row[d] != kMeanDay) continue;
      if (const auto v = parse_double(row[r])) obtained = fixed(*v, 2);
    }
    table.rows.push_back({"5-day mean RMSE (persons)", area_name(areas[i]), fixed(published, 2),
                          obtained});
  }
  struct Level {
    const char* quantity;
    bool in_class;
    double x;
    const char* published;
  };
  const Level levels[] = {
      {"in-class P(|error| <= 2)", true, 2.0, "~0.90"},
      {"in-class P(|error| <= 1)", true, 1.0, "~0.60"},
      {"no-class P(|error| <= 4)", false, 4.0, "~0.90"},
      {"no-class P(|error| <= 2)", false, 2.0, "~0.60"},
  };
  for (const auto& level : levels) {
    for (std::size_t i = 0; i < areas.size(); ++i) {
      const auto v = ecdf_at(level.in_class ? inclass[i] : noclass[i], level.x);
      table.rows.push_back(
          {level.quantity, area_name(areas[i]), level.published, v ? fixed(*v, 2) : "n/a"});
    }
  }
  return table;
}

std::string format_comparison(const ComparisonTable& table) {
  std::vector<std::array<std::string, 5>> cells;
  cells.push_back({"quantity", "area", "published", "obtained", "status"});
  for (const auto& r : table.rows) {
    cells.push_back({r.quantity, r.area, r.published, r.obtained, "informational"});
  }
  std::array<std::size_t, 5> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < 5; ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  if (table.synthetic) {
    out += "NOTE: synthetic data, comparison informational only\n\n";
  } else {
    out += "NOTE: published values come from a different site; comparison informational only\n\n";
  }
  for (std::size_t r = 0; r < cells.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < 5; ++c) {
      line += cells[r][c];
      if (c + 1 < 5) line += std::string(width[c] - cells[r][c].size() + 2, ' ');
    }
    out += line + "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < 5; ++c) total += width[c] + (c + 1 < 5 ? 2 : 0);
      out += std::string(total, '-') + "\n";
    }
  }
  return out;
}

}  // namespace rsrpflow
