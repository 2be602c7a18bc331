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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "test_util.hpp"

namespace rsrpflow {
namespace {

using testing::ThrowsKind;

// 1 - 6 sum d^2 / (n (n^2 - 1)) on plain 1..n ranks of distinct values.
double oracle_eq1(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  auto rank = [n](const std::vector<double>& v) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t below = 0;
      for (std::size_t j = 0; j < n; ++j) below += v[j] < v[i];
      r[i] = static_cast<double>(below + 1);
    }
    return r;
  };
  const auto rx = rank(x);
  const auto ry = rank(y);
  double d2 = 0;
  for (std::size_t i = 0; i < n; ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

TEST(Ranks, HandValues) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 30}), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(average_ranks(std::vector<double>{5, 5}), (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(average_ranks(std::vector<double>{3, 1, 3, 2}),
            (std::vector<double>{3.5, 1, 3.5, 2}));
  EXPECT_TRUE(ThrowsKind([] { average_ranks(std::vector<double>{}); }, ErrorKind::kEmpty));
}

TEST(SpearmanEq1, HandValues) {
  const std::vector<double> x = {1, 2, 3, 4, 5};
  std::vector<double> rev(x.rbegin(), x.rend());
  EXPECT_DOUBLE_EQ(spearman_eq1(x, x).rho, 1.0);
  EXPECT_DOUBLE_EQ(spearman_eq1(x, rev).rho, -1.0);
  EXPECT_DOUBLE_EQ(spearman_eq1(std::vector<double>{1, 2, 3}, std::vector<double>{2, 1, 3}).rho,
                   0.5);
  EXPECT_EQ(spearman_eq1(x, x).n_samples, 5);
  EXPECT_EQ(spearman_eq1(x, x).method, CorrelationMethod::kEq1);
}

TEST(SpearmanEq1, AllPermutationsOfFour) {
  std::vector<double> base = {0.3, 1.7, 2.2, 9.0};
  std::vector<int> perm = {0, 1, 2, 3};
  int seen = 0;
  do {
    std::vector<double> y(4);
    for (int i = 0; i < 4; ++i) y[i] = base[perm[i]];
    EXPECT_NEAR(spearman_eq1(base, y).rho, oracle_eq1(base, y), 1e-15);
    ++seen;
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(seen, 24);
}

TEST(Spearman, TieCorrectedHandValue) {
  const std::vector<double> x = {1, 1, 2, 3};
  const std::vector<double> y = {1, 2, 2, 3};
  const double expected = pearson({1.5, 1.5, 3, 4}, {1, 2.5, 2.5, 4});
  EXPECT_NEAR(spearman(x, y).rho, expected, 1e-15);
}

TEST(Spearman, MatchesEq1WithoutTies) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> len(3, 60);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = len(rng);
    std::vector<double> x(n);
    std::vector<double> y(n);
    for (auto& v : x) v = u(rng);
    for (auto& v : y) v = u(rng);
    EXPECT_NEAR(spearman(x, y).rho, spearman_eq1(x, y).rho, 1e-12);
  }
}

TEST(Spearman, ConstantInputUndefined) {
  const std::vector<double> c = {2, 2, 2};
  const std::vector<double> y = {1, 2, 3};
  EXPECT_TRUE(ThrowsKind([&] { spearman(c, y); }, ErrorKind::kUndefinedCorrelation));
  EXPECT_TRUE(ThrowsKind([&] { spearman(y, c); }, ErrorKind::kUndefinedCorrelation));
  EXPECT_TRUE(ThrowsKind([&] { spearman(y, std::vector<double>{1, 2}); },
                         ErrorKind::kLengthMismatch));
}

TEST(Spearman, PropertyMonotoneInvarianceAndBounds) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> small(0, 4);
  for (int rep = 0; rep < 300; ++rep) {
    const int len = 5 + rep % 40;
    std::vector<double> x(len);
    std::vector<double> y(len);
    for (int i = 0; i < len; ++i) {
      // Some ties on purpose.
      x[i] = rep % 2 ? static_cast<double>(small(rng)) : n(rng);
      y[i] = 0.5 * x[i] + n(rng);
    }
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
    std::vector<double> tx(len);
    for (int i = 0; i < len; ++i) tx[i] = std::exp(x[i]) + 3.0 * x[i];
    const double r = spearman(x, y).rho;
    EXPECT_LE(std::abs(r), 1.0);
    EXPECT_LE(std::abs(spearman_eq1(x, y).rho), 1.0 + 1e-12);
    EXPECT_DOUBLE_EQ(spearman(tx, y).rho, r);
    EXPECT_DOUBLE_EQ(spearman_eq1(tx, y).rho, spearman_eq1(x, y).rho);
  }
}

TEST(Rmse, HandValues) {
  const std::vector<double> t = {1, 2, 3};
  EXPECT_EQ(rmse(t, t), 0.0);
  EXPECT_EQ(rmse(std::vector<double>{1, -1}, std::vector<double>{0, 0}), 1.0);
  EXPECT_EQ(rmse(std::vector<double>{2, 4}, std::vector<double>{0, 1}), std::sqrt(6.5));
  EXPECT_TRUE(ThrowsKind([] { rmse(std::vector<double>{}, std::vector<double>{}); },
                         ErrorKind::kInvalidArgument));
}

TEST(Rmse, PropertyNonNegativeZeroIffEqual) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> v(0, 3);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<double> a(6);
    std::vector<double> b(6);
    for (int i = 0; i < 6; ++i) {
      a[i] = v(rng);
      b[i] = v(rng);
    }
    const double r = rmse(a, b);
    EXPECT_GE(r, 0.0);
    EXPECT_EQ(r == 0.0, a == b);
  }
}

TEST(Ecdf, HandValues) {
  const auto z = ecdf(std::vector<double>{0, 0, 0});
  ASSERT_EQ(z.size(), 1u);
  EXPECT_EQ(z[0].threshold, 0.0);
  EXPECT_EQ(z[0].fraction, 1.0);
  const auto e = ecdf(std::vector<double>{1, 2, 2, 4});
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].threshold, 1.0);
  EXPECT_EQ(e[0].fraction, 0.25);
  EXPECT_EQ(e[1].threshold, 2.0);
  EXPECT_EQ(e[1].fraction, 0.75);
  EXPECT_EQ(e[2].threshold, 4.0);
  EXPECT_EQ(e[2].fraction, 1.0);
}

TEST(Ecdf, PropertyMatchesCountingOracle) {
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> v(0, 20);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> errors(1 + rep % 50);
    for (auto& x : errors) x = v(rng) / 4.0;
    const auto pts = ecdf(errors);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto below = std::count_if(errors.begin(), errors.end(),
                                       [&](double x) { return x <= pts[i].threshold; });
      EXPECT_DOUBLE_EQ(pts[i].fraction, static_cast<double>(below) / errors.size());
      if (i > 0) {
        EXPECT_GT(pts[i].threshold, pts[i - 1].threshold);
        EXPECT_GE(pts[i].fraction, pts[i - 1].fraction);
      }
    }
    EXPECT_EQ(pts.back().fraction, 1.0);
  }
}

TEST(Quantile, TypeSevenHandValues) {
  const std::vector<double> s = {1, 2, 3, 4};
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.75), 3.25);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 1.0), 4.0);
}

TEST(Boxplot, HandValues) {
  const auto b = boxplot(3, {0, 1, 2, 3, 4});
  EXPECT_EQ(b.group_key, 3);
  EXPECT_EQ(b.n, 5);
  EXPECT_DOUBLE_EQ(b.q1, 1.0);
  EXPECT_DOUBLE_EQ(b.median, 2.0);
  EXPECT_DOUBLE_EQ(b.q3, 3.0);
  EXPECT_DOUBLE_EQ(b.min, 0.0);
  EXPECT_DOUBLE_EQ(b.max, 4.0);
  EXPECT_TRUE(b.outliers.empty());

  const auto z = boxplot(0, {0, 0, 0, 0});
  EXPECT_EQ(z.min, 0.0);
  EXPECT_EQ(z.q1, 0.0);
  EXPECT_EQ(z.median, 0.0);
  EXPECT_EQ(z.q3, 0.0);
  EXPECT_EQ(z.max, 0.0);
  EXPECT_TRUE(z.outliers.empty());
}

TEST(Boxplot, FarValueIsOutlier) {
  std::vector<double> v;
  for (int i = 0; i < 20; ++i) v.push_back(0.1 * (i % 5));
  v.push_back(100.0);
  const auto b = boxplot(1, v);
  ASSERT_EQ(b.outliers.size(), 1u);
  EXPECT_EQ(b.outliers[0], 100.0);
  EXPECT_LE(b.max, b.q3 + 1.5 * (b.q3 - b.q1));
}

TEST(Boxplot, GroupsByTruthCount) {
  const std::vector<double> pred = {0.5, 1.0, 2.5, 0.0, 3.0};
  const std::vector<double> truth = {0, 1, 2, 0, 2};
  const auto groups = abs_error_by_count(pred, truth);
  ASSERT_EQ(groups.size(), 3u);
  EXPECT_EQ(groups[0].group_key, 0);
  EXPECT_EQ(groups[0].n, 2);
  EXPECT_DOUBLE_EQ(groups[0].median, 0.25);
  EXPECT_EQ(groups[1].group_key, 1);
  EXPECT_DOUBLE_EQ(groups[1].median, 0.0);
  EXPECT_EQ(groups[2].group_key, 2);
  EXPECT_DOUBLE_EQ(groups[2].median, 0.75);
}

}  // namespace
}  // namespace rsrpflow
