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

#include "rsrpflow/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rsrpflow/error.hpp"

namespace rsrpflow {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y, std::size_t min_n) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::kLengthMismatch, "input lengths differ (" + std::to_string(x.size()) +
                                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < min_n) {
    throw Error(ErrorKind::kInvalidArgument,
                "need at least " + std::to_string(min_n) + " samples");
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::kEmpty, "ranks of an empty list");
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

CorrelationResult spearman_eq1(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double d = rx[i] - ry[i];
    sum_d2 += d * d;
  }
  const double n = static_cast<double>(x.size());
  const double rho = 1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0));
  return {rho, static_cast<std::int64_t>(x.size()), CorrelationMethod::kEq1};
}

CorrelationResult spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y, 2);
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw Error(ErrorKind::kUndefinedCorrelation, "rank variance is zero (constant input)");
  }
  const double rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  return {rho, static_cast<std::int64_t>(rx.size()), CorrelationMethod::kTieCorrected};
}

double rmse(std::span<const double> pred, std::span<const double> truth) {
  check_pair(pred, truth, 1);
  double ss = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double e = pred[i] - truth[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(pred.size()));
}

std::vector<EcdfPoint> ecdf(std::span<const double> errors) {
  if (errors.empty()) throw Error(ErrorKind::kEmpty, "ECDF of an empty list");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<EcdfPoint> out;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    out.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  out.back().fraction = 1.0;
  return out;
}

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorKind::kEmpty, "quantile of an empty list");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxplotStats boxplot(std::int64_t group_key, std::vector<double> values) {
  if (values.empty()) throw Error(ErrorKind::kEmpty, "boxplot of an empty group");
  std::sort(values.begin(), values.end());
  BoxplotStats s;
  s.group_key = group_key;
  s.n = static_cast<std::int64_t>(values.size());
  s.q1 = quantile_sorted(values, 0.25);
  s.median = quantile_sorted(values, 0.5);
  s.q3 = quantile_sorted(values, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * iqr;
  const double hi_fence = s.q3 + 1.5 * iqr;
  double lo = s.q1;
  double hi = s.q3;
  for (double v : values) {
    if (v < lo_fence || v > hi_fence) {
      s.outliers.push_back(v);
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  s.min = lo;
  s.max = hi;
  return s;
}

std::vector<BoxplotStats> abs_error_by_count(std::span<const double> pred,
                                             std::span<const double> truth) {
  check_pair(pred, truth, 0);
  std::map<std::int64_t, std::vector<double>> groups;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    groups[std::llround(truth[i])].push_back(std::abs(pred[i] - truth[i]));
  }
  std::vector<BoxplotStats> out;
  for (auto& [count, errors] : groups) out.push_back(boxplot(count, std::move(errors)));
  return out;
}

}  // namespace rsrpflow
