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

#include "rsrpflow/core_data.hpp"

#include <algorithm>
#include <cmath>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

constexpr std::string_view kRsrpHeader = "t_seconds,rsrp_dbm";
constexpr std::string_view kCountsHeader = "t_start_seconds,count";
constexpr double kSpacingTolerance = 1e-9;

// Splits a CSV body into (line number, line) pairs after checking the header.
// Line numbers are 1-based file lines, so the first data row is line 2.
std::vector<std::pair<std::size_t, std::string_view>> data_lines(
    std::string_view content, std::string_view expected_header, const std::string& name) {
  if (content.empty()) throw Error(ErrorKind::kEmpty, name + ": empty file");
  std::vector<std::pair<std::size_t, std::string_view>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < content.size()) {
    std::size_t end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = trim(content.substr(start, end - start));
    ++line_no;
    start = end + 1;
    if (line_no == 1) {
      if (line != expected_header) {
        throw Error(ErrorKind::kParse, name + ": line 1: expected header '" +
                                           std::string(expected_header) + "'");
      }
      continue;
    }
    if (line.empty()) {
      if (start >= content.size()) break;
      throw Error(ErrorKind::kParse, name + ": line " + std::to_string(line_no) + ": blank row");
    }
    rows.emplace_back(line_no, line);
  }
  if (rows.empty()) throw Error(ErrorKind::kEmpty, name + ": no data rows");
  return rows;
}

std::string stem_without_prefix(const std::filesystem::path& path, std::string_view prefix) {
  std::string stem = path.stem().string();
  if (stem.rfind(prefix, 0) == 0) stem.erase(0, prefix.size());
  return stem;
}

}  // namespace

std::string_view to_string(AreaId area) {
  switch (area) {
    case AreaId::kSmall: return "small";
    case AreaId::kMedium: return "medium";
    case AreaId::kLarge: return "large";
  }
  return "small";
}

AreaId parse_area(std::string_view text) {
  text = trim(text);
  if (text == "small") return AreaId::kSmall;
  if (text == "medium") return AreaId::kMedium;
  if (text == "large") return AreaId::kLarge;
  throw Error(ErrorKind::kInvalidArgument, "unknown area '" + std::string(text) + "'");
}

void AreaSpec::validate() const {
  if (!(area_m2 > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "area_m2 must be positive");
  }
  if (effective_lookback_s != 4.0 && effective_lookback_s != 6.0 &&
      effective_lookback_s != 8.0) {
    throw Error(ErrorKind::kInvalidArgument, "effective_lookback_s must be 4, 6 or 8");
  }
}

int AreaSpec::lookback_intervals() const {
  return static_cast<int>(std::lround(effective_lookback_s / kCountWindowLength));
}

std::array<AreaSpec, 3> default_area_specs() {
  return {AreaSpec{AreaId::kSmall, 13.1, 4.0}, AreaSpec{AreaId::kMedium, 27.0, 6.0},
          AreaSpec{AreaId::kLarge, 66.9, 8.0}};
}

const AreaSpec& area_spec_for(std::span<const AreaSpec> specs, AreaId area) {
  for (const auto& spec : specs) {
    if (spec.area == area) return spec;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "no area spec for '" + std::string(to_string(area)) + "'");
}

RsrpTrace::RsrpTrace(std::string day_id, std::vector<double> times, std::vector<double> rsrp_dbm,
                     double nominal_interval)
    : day_id_(std::move(day_id)),
      times_(std::move(times)),
      rsrp_(std::move(rsrp_dbm)),
      nominal_interval_(nominal_interval) {
  if (!(nominal_interval_ > 0.0) || !std::isfinite(nominal_interval_)) {
    throw Error(ErrorKind::kInvalidArgument, "nominal_interval must be positive");
  }
  if (times_.size() != rsrp_.size()) {
    throw Error(ErrorKind::kLengthMismatch, "times and rsrp lengths differ");
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(rsrp_[i])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "non-finite sample at index " + std::to_string(i));
    }
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw Error(ErrorKind::kOrder,
                  "sample times not strictly increasing at index " + std::to_string(i));
    }
  }
}

double RsrpTrace::start_time() const { return times_.empty() ? 0.0 : times_.front(); }

double RsrpTrace::end_time() const {
  return times_.empty() ? 0.0 : times_.back() + nominal_interval_;
}

std::pair<std::size_t, std::size_t> RsrpTrace::index_range(double t0, double t1) const {
  const auto first = std::lower_bound(times_.begin(), times_.end(), t0 - kTimeEpsilon);
  const auto last = std::lower_bound(first, times_.end(), t1 - kTimeEpsilon);
  return {static_cast<std::size_t>(first - times_.begin()),
          static_cast<std::size_t>(last - times_.begin())};
}

CountSeries::CountSeries(std::string day_id, AreaId area, std::vector<CountWindow> windows,
                         double window_len, double shift)
    : day_id_(std::move(day_id)),
      area_(area),
      windows_(std::move(windows)),
      window_len_(window_len),
      shift_(shift) {
  if (!(window_len_ > 0.0) || !(shift_ > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "window_len and shift must be positive");
  }
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    if (windows_[i].count < 0) {
      throw Error(ErrorKind::kNegativeCount, "negative count at window " + std::to_string(i));
    }
    if (i > 0) {
      const double step = windows_[i].t_start - windows_[i - 1].t_start;
      if (std::abs(step - shift_) > kSpacingTolerance) {
        throw Error(ErrorKind::kSpacing,
                    "window spacing differs from shift at window " + std::to_string(i));
      }
    }
  }
}

RsrpTrace load_rsrp_csv(const std::filesystem::path& path) {
  return load_rsrp_csv(path, stem_without_prefix(path, "rsrp_"));
}

RsrpTrace load_rsrp_csv(const std::filesystem::path& path, std::string day_id,
                        double nominal_interval) {
  const std::string name = path.filename().string();
  const std::string content = read_file(path);
  const auto rows = data_lines(content, kRsrpHeader, name);
  std::vector<double> times;
  std::vector<double> values;
  times.reserve(rows.size());
  values.reserve(rows.size());
  for (const auto& [line_no, line] : rows) {
    const auto fields = split(line, ',');
    std::optional<double> t;
    std::optional<double> v;
    if (fields.size() == 2) {
      t = parse_double(fields[0]);
      v = parse_double(fields[1]);
    }
    if (!t || !v) {
      throw Error(ErrorKind::kParse, name + ": line " + std::to_string(line_no) +
                                         ": expected two numeric fields");
    }
    if (!times.empty() && !(*t > times.back())) {
      throw Error(ErrorKind::kOrder, name + ": line " + std::to_string(line_no) +
                                         ": timestamp not increasing");
    }
    times.push_back(*t);
    values.push_back(*v);
  }
  return RsrpTrace(std::move(day_id), std::move(times), std::move(values), nominal_interval);
}

void save_rsrp_csv(const RsrpTrace& trace, const std::filesystem::path& path) {
  std::string out;
  out.reserve(trace.size() * 20 + 32);
  out += kRsrpHeader;
  out += '\n';
  const auto t = trace.times();
  const auto v = trace.rsrp();
  for (std::size_t i = 0; i < t.size(); ++i) {
    out += format_double(t[i]);
    out += ',';
    out += format_double(v[i]);
    out += '\n';
  }
  write_file(path, out);
}

CountSeries load_counts_csv(const std::filesystem::path& path, AreaId area) {
  std::string stem = stem_without_prefix(path, "counts_");
  const std::string suffix = "_" + std::string(to_string(area));
  if (stem.size() > suffix.size() &&
      stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
    stem.erase(stem.size() - suffix.size());
  }
  return load_counts_csv(path, area, stem);
}

CountSeries load_counts_csv(const std::filesystem::path& path, AreaId area, std::string day_id) {
  const std::string name = path.filename().string();
  const std::string content = read_file(path);
  const auto rows = data_lines(content, kCountsHeader, name);
  std::vector<CountWindow> windows;
  windows.reserve(rows.size());
  for (const auto& [line_no, line] : rows) {
    const auto fields = split(line, ',');
    std::optional<double> t;
    std::optional<std::int64_t> count;
    if (fields.size() == 2) {
      t = parse_double(fields[0]);
      count = parse_int(fields[1]);
      if (!count) {
        // Accept integral values written with a decimal point, e.g. "3.0".
        const auto as_double = parse_double(fields[1]);
        if (as_double && *as_double == std::floor(*as_double) && std::abs(*as_double) < 1e15) {
          count = static_cast<std::int64_t>(*as_double);
        }
      }
    }
    if (!t || !count) {
      throw Error(ErrorKind::kParse, name + ": line " + std::to_string(line_no) +
                                         ": expected numeric t_start and integer count");
    }
    if (*count < 0) {
      throw Error(ErrorKind::kNegativeCount,
                  name + ": line " + std::to_string(line_no) + ": negative count");
    }
    if (!windows.empty() && std::abs((*t - windows.back().t_start) - kCountShift) >
                                kSpacingTolerance) {
      throw Error(ErrorKind::kSpacing, name + ": line " + std::to_string(line_no) +
                                           ": window spacing differs from 1 s shift");
    }
    windows.push_back({*t, *count});
  }
  return CountSeries(std::move(day_id), area, std::move(windows));
}

void save_counts_csv(const CountSeries& series, const std::filesystem::path& path) {
  std::string out;
  out.reserve(series.size() * 12 + 32);
  out += kCountsHeader;
  out += '\n';
  for (const auto& w : series.windows()) {
    out += format_double(w.t_start);
    out += ',';
    out += std::to_string(w.count);
    out += '\n';
  }
  write_file(path, out);
}

std::string rsrp_file_name(std::string_view day_id) {
  return "rsrp_" + std::string(day_id) + ".csv";
}

std::string counts_file_name(std::string_view day_id, AreaId area) {
  return "counts_" + std::string(day_id) + "_" + std::string(to_string(area)) + ".csv";
}

std::vector<GapInterval> detect_gaps(const RsrpTrace& trace, double gap_factor) {
  std::vector<GapInterval> gaps;
  const double limit = gap_factor * trace.nominal_interval();
  const auto t = trace.times();
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] - t[i - 1] > limit) gaps.push_back({t[i - 1], t[i]});
  }
  return gaps;
}

double window_coverage(const RsrpTrace& trace, double t0, double t1) {
  if (!(t1 > t0)) {
    throw Error(ErrorKind::kInvalidArgument, "degenerate window: t1 must exceed t0");
  }
  const auto [first, last] = trace.index_range(t0, t1);
  const double expected = (t1 - t0) / trace.nominal_interval();
  const double fraction = static_cast<double>(last - first) / expected;
  return std::clamp(fraction, 0.0, 1.0);
}

}  // namespace rsrpflow
