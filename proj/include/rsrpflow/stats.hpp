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

#ifndef RSRPFLOW_STATS_HPP_
#define RSRPFLOW_STATS_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace rsrpflow {

enum class CorrelationMethod {
  kEq1,           // 1 - 6 sum d^2 / (N (N^2 - 1)) on average ranks
  kTieCorrected,  // Pearson correlation of the average-rank vectors
};

struct CorrelationResult {
  double rho = 0.0;
  std::int64_t n_samples = 0;
  CorrelationMethod method = CorrelationMethod::kTieCorrected;
};

// Ranks 1..n; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

CorrelationResult spearman_eq1(std::span<const double> x, std::span<const double> y);
// Throws kUndefinedCorrelation when either rank vector is constant.
CorrelationResult spearman(std::span<const double> x, std::span<const double> y);

double rmse(std::span<const double> pred, std::span<const double> truth);

struct EcdfPoint {
  double threshold = 0.0;
  double fraction = 0.0;
};

// Right-continuous step points, one per distinct error value.
std::vector<EcdfPoint> ecdf(std::span<const double> errors);

// Type-7 quantile (linear interpolation between order statistics) of sorted
// data, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct BoxplotStats {
  std::int64_t group_key = 0;
  std::int64_t n = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<double> outliers;
};

BoxplotStats boxplot(std::int64_t group_key, std::vector<double> values);

// |pred - truth| grouped by integer truth count, ascending by count.
std::vector<BoxplotStats> abs_error_by_count(std::span<const double> pred,
                                             std::span<const double> truth);

}  // namespace rsrpflow

#endif  // RSRPFLOW_STATS_HPP_
