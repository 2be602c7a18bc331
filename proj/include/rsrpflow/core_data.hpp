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

// Measurement-day data: the 100 Hz RSRP trace of one day and the per-area
// pedestrian counts on 2 s windows shifted by 1 s. Both are immutable after
// construction; constructors enforce the invariants and throw rsrpflow::Error.

#ifndef RSRPFLOW_CORE_DATA_HPP_
#define RSRPFLOW_CORE_DATA_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rsrpflow {

// Sample-membership tolerance for half-open time windows. Timestamps such as
// 0.3 are not exact in binary, so window edges are compared with this slack.
inline constexpr double kTimeEpsilon = 1e-7;

inline constexpr double kDefaultSampleInterval = 0.01;
inline constexpr double kCountWindowLength = 2.0;
inline constexpr double kCountShift = 1.0;

enum class AreaId { kSmall, kMedium, kLarge };

inline constexpr std::array<AreaId, 3> kAllAreas = {AreaId::kSmall, AreaId::kMedium,
                                                    AreaId::kLarge};

std::string_view to_string(AreaId area);
AreaId parse_area(std::string_view text);

struct AreaSpec {
  AreaId area = AreaId::kSmall;
  double area_m2 = 13.1;
  double effective_lookback_s = 4.0;

  void validate() const;
  // Number of 2 s look-back intervals covered by effective_lookback_s.
  int lookback_intervals() const;
};

// 13.1 / 27.0 / 66.9 m^2 with effective look-backs of 4 / 6 / 8 s.
std::array<AreaSpec, 3> default_area_specs();
const AreaSpec& area_spec_for(std::span<const AreaSpec> specs, AreaId area);

struct GapInterval {
  double start = 0.0;
  double end = 0.0;
  friend bool operator==(const GapInterval&, const GapInterval&) = default;
};

class RsrpTrace {
 public:
  RsrpTrace() = default;
  RsrpTrace(std::string day_id, std::vector<double> times, std::vector<double> rsrp_dbm,
            double nominal_interval = kDefaultSampleInterval);

  const std::string& day_id() const { return day_id_; }
  std::span<const double> times() const { return times_; }
  std::span<const double> rsrp() const { return rsrp_; }
  double nominal_interval() const { return nominal_interval_; }
  std::size_t size() const { return times_.size(); }
  bool empty() const { return times_.empty(); }

  // First sample at or after the start of coverage and one-past-the-end of
  // coverage (last sample time + nominal interval).
  double start_time() const;
  double end_time() const;

  // Index range [first, last) of samples with t in [t0, t1).
  std::pair<std::size_t, std::size_t> index_range(double t0, double t1) const;

  friend bool operator==(const RsrpTrace&, const RsrpTrace&) = default;

 private:
  std::string day_id_;
  std::vector<double> times_;
  std::vector<double> rsrp_;
  double nominal_interval_ = kDefaultSampleInterval;
};

struct CountWindow {
  double t_start = 0.0;
  std::int64_t count = 0;
  friend bool operator==(const CountWindow&, const CountWindow&) = default;
};

class CountSeries {
 public:
  CountSeries() = default;
  CountSeries(std::string day_id, AreaId area, std::vector<CountWindow> windows,
              double window_len = kCountWindowLength, double shift = kCountShift);

  const std::string& day_id() const { return day_id_; }
  AreaId area() const { return area_; }
  std::span<const CountWindow> windows() const { return windows_; }
  double window_len() const { return window_len_; }
  double shift() const { return shift_; }
  std::size_t size() const { return windows_.size(); }

  friend bool operator==(const CountSeries&, const CountSeries&) = default;

 private:
  std::string day_id_;
  AreaId area_ = AreaId::kSmall;
  std::vector<CountWindow> windows_;
  double window_len_ = kCountWindowLength;
  double shift_ = kCountShift;
};

// CSV with header `t_seconds,rsrp_dbm`. The day id defaults to the file stem
// with a leading "rsrp_" removed.
RsrpTrace load_rsrp_csv(const std::filesystem::path& path);
RsrpTrace load_rsrp_csv(const std::filesystem::path& path, std::string day_id,
                        double nominal_interval = kDefaultSampleInterval);
void save_rsrp_csv(const RsrpTrace& trace, const std::filesystem::path& path);

// CSV with header `t_start_seconds,count`.
CountSeries load_counts_csv(const std::filesystem::path& path, AreaId area);
CountSeries load_counts_csv(const std::filesystem::path& path, AreaId area, std::string day_id);
void save_counts_csv(const CountSeries& series, const std::filesystem::path& path);

std::string rsrp_file_name(std::string_view day_id);
std::string counts_file_name(std::string_view day_id, AreaId area);

// A gap is any consecutive pair whose spacing exceeds gap_factor times the
// nominal interval; the interval spans the open time between the two samples.
std::vector<GapInterval> detect_gaps(const RsrpTrace& trace, double gap_factor = 3.0);

// Fraction of the expected samples present in [t0, t1), clamped to [0, 1].
double window_coverage(const RsrpTrace& trace, double t0, double t1);

}  // namespace rsrpflow

#endif  // RSRPFLOW_CORE_DATA_HPP_
