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

// Shapley attribution for GbdtModel.
//
// Both routes use the same path-dependent value function: for a feature
// subset S, a tree is evaluated by following the row at nodes that split on a
// feature in S and by averaging both children, weighted by their training
// cover, at every other node. tree_shap computes the exact Shapley values of
// that game in polynomial time; brute_shapley enumerates all 2^M subsets and
// exists as an oracle for it.

#ifndef RSRPFLOW_SHAP_HPP_
#define RSRPFLOW_SHAP_HPP_

#include <span>
#include <vector>

#include "rsrpflow/features.hpp"
#include "rsrpflow/gbdt.hpp"

namespace rsrpflow {

struct ShapAttribution {
  std::vector<double> per_feature;
  double base = 0.0;  // expected model output with every feature absent

  double total() const;  // base + sum of per_feature
};

inline constexpr int kMaxBruteForceFeatures = 15;

ShapAttribution tree_shap(const GbdtModel& model, std::span<const double> row);
ShapAttribution brute_shapley(const GbdtModel& model, std::span<const double> row);

// Cover-weighted expectation of the model output when only the features in
// `present` (bit j = feature j) follow the row.
double subset_value(const GbdtModel& model, std::span<const double> row, std::uint32_t present);

// Batch TreeSHAP. Each tree is compiled once into per-leaf tables and then
// applied to every row, so cost per row is linear in the number of leaves
// times the depth.
class TreeShapExplainer {
 public:
  explicit TreeShapExplainer(const GbdtModel& model);

  // One attribution per row, in input order.
  std::vector<ShapAttribution> explain(const std::vector<std::vector<double>>& rows) const;

 private:
  const GbdtModel& model_;
  double base_ = 0.0;
};

// Mean |phi_j| over the complete rows of the table.
std::vector<double> mean_abs_shap(const GbdtModel& model, const FeatureTable& table);

}  // namespace rsrpflow

#endif  // RSRPFLOW_SHAP_HPP_
