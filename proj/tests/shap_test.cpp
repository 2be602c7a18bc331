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

#include "rsrpflow/shap.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.hpp"

namespace rsrpflow {
namespace {

using testing::ThrowsKind;

GbdtModel one_tree(std::vector<TreeNode> nodes, int m, double lr = 1.0, double base = 0.0) {
  GbdtModel model;
  model.learning_rate = lr;
  model.base_score = base;
  for (int j = 0; j < m; ++j) model.feature_names.push_back("f" + std::to_string(j));
  model.trees.push_back(Tree{std::move(nodes)});
  return model;
}

TEST(TreeShap, SingleLeafTree) {
  const auto m = one_tree({TreeNode{-1, 0.0, -1, -1, 1.75, 10}}, 3);
  const auto a = tree_shap(m, std::vector<double>{0.1, 0.2, 0.3});
  for (double p : a.per_feature) EXPECT_EQ(p, 0.0);
  EXPECT_DOUBLE_EQ(a.base, 1.75);
}

TEST(TreeShap, SingleFeatureIsPredictionMinusBase) {
  const auto m = one_tree({TreeNode{0, 0.5, 1, 2, 0.0, 10}, TreeNode{-1, 0, -1, -1, -1.0, 3},
                           TreeNode{-1, 0, -1, -1, 2.0, 7}},
                          1, 0.3, 1.0);
  for (double x : {0.2, 0.9}) {
    const std::vector<double> row = {x};
    const auto a = tree_shap(m, row);
    EXPECT_NEAR(a.per_feature[0], predict(m, row) - a.base, 1e-15);
  }
  EXPECT_NEAR(tree_shap(m, std::vector<double>{0.2}).base, 1.0 + 0.3 * (0.3 * -1.0 + 0.7 * 2.0),
              1e-15);
}

TEST(TreeShap, SymmetricFeaturesGetEqualCredit) {
  // f(x) = 1 when both features are >= 0.5, split on f0 then f1 and mirrored.
  const auto m = one_tree({TreeNode{0, 0.5, 1, 2, 0, 100}, TreeNode{-1, 0, -1, -1, 0.0, 50},
                           TreeNode{1, 0.5, 3, 4, 0, 50}, TreeNode{-1, 0, -1, -1, 0.0, 25},
                           TreeNode{-1, 0, -1, -1, 1.0, 25}},
                          2);
  // Same model with the roles of f0 and f1 swapped in the tree structure.
  const auto m2 = one_tree({TreeNode{1, 0.5, 1, 2, 0, 100}, TreeNode{-1, 0, -1, -1, 0.0, 50},
                            TreeNode{0, 0.5, 3, 4, 0, 50}, TreeNode{-1, 0, -1, -1, 0.0, 25},
                            TreeNode{-1, 0, -1, -1, 1.0, 25}},
                           2);
  const std::vector<double> row = {0.9, 0.9};
  const auto a = tree_shap(m, row);
  EXPECT_NEAR(a.per_feature[0], a.per_feature[1], 1e-15);
  const auto b = tree_shap(m2, row);
  EXPECT_NEAR(b.per_feature[0], b.per_feature[1], 1e-15);
}

TEST(TreeShap, DepthTwoMatchesBruteForce) {
  const auto m = one_tree({TreeNode{0, 0.5, 1, 2, 0, 100}, TreeNode{1, 0.3, 3, 4, 0, 40},
                           TreeNode{1, 0.7, 5, 6, 0, 60}, TreeNode{-1, 0, -1, -1, 1.0, 10},
                           TreeNode{-1, 0, -1, -1, -2.0, 30}, TreeNode{-1, 0, -1, -1, 4.0, 45},
                           TreeNode{-1, 0, -1, -1, 0.5, 15}},
                          2);
  for (const auto& row : {std::vector<double>{0.1, 0.1}, std::vector<double>{0.1, 0.9},
                          std::vector<double>{0.6, 0.5}, std::vector<double>{0.9, 0.8}}) {
    const auto a = tree_shap(m, row);
    const auto b = brute_shapley(m, row);
    for (int j = 0; j < 2; ++j) EXPECT_NEAR(a.per_feature[j], b.per_feature[j], 1e-12);
    EXPECT_NEAR(a.base, b.base, 1e-12);
  }
}

TEST(TreeShap, PropertyRandomModelsMatchBruteForce) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 60; ++rep) {
    const int m = 1 + rep % 5;
    const int depth = 1 + rep % 3;
    const auto model = testing::random_model(rng, m, depth, 1 + rep % 6);
    ASSERT_NO_THROW(model.validate());
    for (int r = 0; r < 5; ++r) {
      const auto row = testing::random_row(rng, m);
      const auto a = tree_shap(model, row);
      const auto b = brute_shapley(model, row);
      for (int j = 0; j < m; ++j) EXPECT_NEAR(a.per_feature[j], b.per_feature[j], 1e-9);
      EXPECT_NEAR(a.total(), predict(model, row), 1e-9);
    }
  }
}

TEST(TreeShap, PropertyDummyFeatureExactlyZero) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 40; ++rep) {
    // Features 0..2 used, feature 3 never split on.
    auto model = testing::random_model(rng, 3, 3, 4);
    model.feature_names.push_back("dummy");
    for (int r = 0; r < 5; ++r) {
      const auto row = testing::random_row(rng, 4);
      EXPECT_EQ(tree_shap(model, row).per_feature[3], 0.0);
      EXPECT_EQ(brute_shapley(model, row).per_feature[3], 0.0);
    }
  }
}

TEST(TreeShap, PropertyZeroTreeChangesNothing) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 20; ++rep) {
    auto model = testing::random_model(rng, 4, 3, 3);
    auto extended = model;
    auto zero = testing::random_model(rng, 4, 2, 1).trees[0];
    for (auto& node : zero.nodes) node.value = 0.0;
    extended.trees.push_back(zero);
    const auto row = testing::random_row(rng, 4);
    EXPECT_EQ(predict(extended, row), predict(model, row));
    const auto a = tree_shap(model, row);
    const auto b = tree_shap(extended, row);
    EXPECT_NEAR(a.base, b.base, 1e-15);
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(a.per_feature[j], b.per_feature[j], 1e-15);
  }
}

TEST(TreeShap, LocalAccuracyOnFittedModel) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> cols(4, std::vector<double>(400));
  std::vector<double> y(400);
  for (int i = 0; i < 400; ++i) {
    for (auto& c : cols) c[i] = u(rng);
    y[i] = 3.0 * cols[0][i] * cols[1][i] + (cols[2][i] > 0.5) + 0.1 * u(rng);
  }
  GbdtParams p;
  p.n_trees = 40;
  p.max_depth = 4;
  const auto model = fit_columns(cols, y, {"a", "b", "c", "d"}, p);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 400; ++i) rows.push_back({cols[0][i], cols[1][i], cols[2][i], cols[3][i]});
  const TreeShapExplainer explainer(model);
  const auto all = explainer.explain(rows);
  for (int i = 0; i < 400; ++i) {
    EXPECT_NEAR(all[i].total(), predict(model, rows[i]), 1e-9);
    if (i < 20) {
      const auto single = tree_shap(model, rows[i]);
      const auto brute = brute_shapley(model, rows[i]);
      for (int j = 0; j < 4; ++j) {
        EXPECT_NEAR(all[i].per_feature[j], single.per_feature[j], 1e-12);
        EXPECT_NEAR(all[i].per_feature[j], brute.per_feature[j], 1e-9);
      }
    }
  }
}

TEST(SubsetValue, EmptyAndFullSubsets) {
  std::mt19937_64 rng(2);
  const auto model = testing::random_model(rng, 3, 3, 5);
  const auto row = testing::random_row(rng, 3);
  EXPECT_NEAR(subset_value(model, row, 0b111), predict(model, row), 1e-12);
  EXPECT_NEAR(subset_value(model, row, 0), tree_shap(model, row).base, 1e-12);
}

TEST(MeanAbsShap, DummyAndSingleRow) {
  std::mt19937_64 rng(3);
  auto model = testing::random_model(rng, 2, 2, 3);
  model.feature_names.push_back("dummy");
  FeatureTable t;
  t.feature_names = model.feature_names;
  FeatureRow r;
  r.features = {0.3, 0.8, 5.0};
  t.rows.push_back(r);
  const auto v = mean_abs_shap(model, t);
  const auto a = tree_shap(model, std::vector<double>{0.3, 0.8, 5.0});
  EXPECT_DOUBLE_EQ(v[0], std::abs(a.per_feature[0]));
  EXPECT_DOUBLE_EQ(v[1], std::abs(a.per_feature[1]));
  EXPECT_EQ(v[2], 0.0);
}

TEST(MeanAbsShap, InformativeFeatureDominates) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FeatureTable t;
  t.feature_names = {"signal", "noise1", "noise2"};
  std::vector<std::vector<double>> cols(3);
  std::vector<double> y;
  for (int i = 0; i < 500; ++i) {
    FeatureRow r;
    const double s = u(rng);
    r.features = {s, u(rng), u(rng)};
    r.label = static_cast<std::int64_t>(std::floor(5.0 * s));
    t.rows.push_back(r);
  }
  GbdtParams p;
  p.n_trees = 30;
  const auto model = fit(t, p);
  const auto v = mean_abs_shap(model, t);
  EXPECT_GT(v[0], 5.0 * v[1]);
  EXPECT_GT(v[0], 5.0 * v[2]);
}

TEST(BruteShapley, TooManyFeatures) {
  GbdtModel m;
  for (int j = 0; j < 16; ++j) m.feature_names.push_back("f" + std::to_string(j));
  EXPECT_TRUE(ThrowsKind([&] { brute_shapley(m, std::vector<double>(16, 0.0)); },
                         ErrorKind::kTooManyFeatures));
}

}  // namespace
}  // namespace rsrpflow
