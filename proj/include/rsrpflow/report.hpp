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

// Report bundle: the CSV tables of one run plus run_manifest.csv. Contents
// depend only on the report and the config, never on the clock.

#ifndef RSRPFLOW_REPORT_HPP_
#define RSRPFLOW_REPORT_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rsrpflow/config.hpp"
#include "rsrpflow/harness.hpp"

namespace rsrpflow {

inline constexpr std::string_view kRunManifestFileName = "run_manifest.csv";

struct BundleFile {
  std::string name;
  std::string content;
};

// Sorted by name; run_manifest.csv is last.
using Bundle = std::vector<BundleFile>;

// Header `area,day,dt,<value_column>,n_rows,n_excluded`.
std::string sweep_csv(const std::vector<SweepRow>& rows, std::string_view value_column);
// Header `area,day,lookback,mean_abs_shap,n_rows,n_excluded`.
std::string lookback_csv(const std::vector<LookbackRow>& rows);
// Header `day,dt,lookback_intervals,rmse,baseline_rmse,n_rows,n_excluded`,
// closed by a "mean" row.
std::string eval_csv(const AreaEval& eval);
// Header `day,threshold,fraction`; per-day points followed by day "all".
std::string ecdf_csv(const AreaEval& eval, bool in_class);
// Header `t_label,truth,pred,abs_error,in_class`.
std::string timeseries_csv(const DayEval& day);
// Header `count,n,min,q1,median,q3,max,outliers`; outliers joined by ';'.
std::string boxplot_csv(const AreaEval& eval);

// `data_source` is "synthetic" or "field".
Bundle make_bundle(const EvalReport& report, const RunConfig& config,
                   std::string_view data_source);

void write_bundle(const Bundle& bundle, const std::filesystem::path& dir);

// FNV-1a over names and contents, in name order.
std::string bundle_checksum(const Bundle& bundle);
// Same over the CSV and SVG files present in dir; sidecar logs are skipped.
std::string directory_checksum(const std::filesystem::path& dir);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Throws kParse when absent.
  std::size_t column(std::string_view name) const;
};

// Comma separated, optional double quotes, first line is the header.
CsvTable parse_csv_table(std::string_view text);
CsvTable read_csv_table(const std::filesystem::path& path);
// Quotes the field when it holds a comma, quote or newline.
std::string csv_field(std::string_view text);

// run_manifest.csv as key -> value.
std::map<std::string, std::string> load_run_manifest(const std::filesystem::path& dir);

struct PublishedComparison {
  std::string quantity;
  std::string area;
  std::string published;
  std::string obtained;  // "n/a" when the bundle lacks the value
};

inline constexpr double kPublishedRhoMin = 0.46;
inline constexpr double kPublishedRhoMax = 0.59;
inline constexpr double kPublishedRmseSmall = 0.53;
inline constexpr double kPublishedRmseMedium = 0.91;
inline constexpr double kPublishedRmseLarge = 1.79;

struct ComparisonTable {
  bool synthetic = false;
  std::vector<PublishedComparison> rows;
};

// Reads correlation.csv, eval_<area>.csv and ecdf_<area>_*.csv of every area
// in the manifest. Missing tables are kIo errors.
ComparisonTable compare_with_published(const std::filesystem::path& bundle_dir);
std::string format_comparison(const ComparisonTable& table);

}  // namespace rsrpflow

#endif  // RSRPFLOW_REPORT_HPP_
