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

// Gradient-boosted regression trees with squared loss.
//
// Trees are grown depth-wise with exact greedy split search: every midpoint
// between adjacent distinct sorted values of every feature is a candidate and
// the one with the largest squared-error reduction wins. Ties go to the lowest
// feature index, then the lowest threshold. There is no row or column
// subsampling, so training is a pure function of (rows, params).

#ifndef RSRPFLOW_GBDT_HPP_
#define RSRPFLOW_GBDT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rsrpflow/features.hpp"

namespace rsrpflow {

struct TreeNode {
  int feature = -1;        // split feature; -1 marks a leaf
  double threshold = 0.0;  // rows with x < threshold go left
  int left = -1;
  int right = -1;
  double value = 0.0;      // leaf output before learning-rate scaling
  std::int64_t cover = 0;  // training rows routed through the node

  bool is_leaf() const { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Nodes in creation order; nodes[0] is the root.
struct Tree {
  std::vector<TreeNode> nodes;

  const TreeNode& leaf_for(std::span<const double> row) const;
  int depth() const;
  // Cover-weighted mean leaf value.
  double expected_value() const;
  friend bool operator==(const Tree&, const Tree&) = default;
};

inline constexpr int kMaxTreeDepth = 16;

struct GbdtParams {
  int n_trees = 200;
  int max_depth = 6;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  std::uint64_t seed = 42;

  void validate() const;
  std::string fingerprint() const;
  friend bool operator==(const GbdtParams&, const GbdtParams&) = default;
};

struct GbdtModel {
  std::vector<Tree> trees;
  double base_score = 0.0;
  double learning_rate = 0.1;
  std::vector<std::string> feature_names;
  GbdtParams params;
  std::string params_fingerprint;
  std::uint64_t seed = 42;

  std::size_t n_features() const { return feature_names.size(); }
  // Throws kCorruptFile / kZeroCover when node links, covers or feature
  // indices are inconsistent.
  void validate() const;
  friend bool operator==(const GbdtModel&, const GbdtModel&) = default;
};

struct SplitCandidate {
  double threshold = 0.0;
  double gain = 0.0;
};

// Best variance-reduction split of one feature, or nullopt when no threshold
// leaves min_samples_leaf rows on both sides with positive gain.
std::optional<SplitCandidate> find_best_split(std::span<const double> feature_values,
                                              std::span<const double> residuals,
                                              int min_samples_leaf);

// Trains on the complete rows of the table.
GbdtModel fit(const FeatureTable& table, const GbdtParams& params);

// Column-major entry point used by fit(FeatureTable).
GbdtModel fit_columns(const std::vector<std::vector<double>>& columns,
                      std::span<const double> labels, std::vector<std::string> feature_names,
                      const GbdtParams& params);

double predict(const GbdtModel& model, std::span<const double> row);

// Dense values of a complete row; throws when a feature is missing.
std::vector<double> dense_row(const FeatureRow& row);

}  // namespace rsrpflow

#endif  // RSRPFLOW_GBDT_HPP_
