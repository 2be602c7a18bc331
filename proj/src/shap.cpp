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

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

#include "rsrpflow/error.hpp"

namespace rsrpflow {

namespace {

// Path-dependent value of a single leaf for a feature subset S: the leaf
// value times, for every distinct feature j on its path, o_j (1 when the row
// satisfies all of j's conditions on the path) if j is in S, else z_j (the
// product of the cover ratios of j's branches). The Shapley value of that
// product game for path feature i is
//
//   v (o_i - z_i) sum_{S in P \ {i}} w(|S|, d) prod_{j not in S, j != i} z_j
//
// where P is the set of satisfied features and w(s, d) = s! (d - s - 1)! / d!.
// It depends on the row only through P, so each leaf stores it for all 2^d
// patterns and a row costs one interval test and one add per path feature.
struct LeafTable {
  std::vector<int> features;  // distinct path features
  std::vector<double> lo;     // the row satisfies feature k when lo <= x < hi
  std::vector<double> hi;
  std::vector<double> phi;    // [pattern * d + k]
};

class TreeTables {
 public:
  explicit TreeTables(const Tree& tree) {
    if (tree.nodes.front().is_leaf()) return;
    std::vector<PathFeature> path;
    walk(tree, 0, path);
  }

  void accumulate(std::span<const double> row, double* phi) const {
    for (const auto& leaf : leaves_) {
      const std::size_t d = leaf.features.size();
      std::size_t pattern = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const double x = row[static_cast<std::size_t>(leaf.features[k])];
        if (x >= leaf.lo[k] && x < leaf.hi[k]) pattern |= std::size_t{1} << k;
      }
      const double* contrib = leaf.phi.data() + pattern * d;
      for (std::size_t k = 0; k < d; ++k) phi[leaf.features[k]] += contrib[k];
    }
  }

 private:
  struct PathFeature {
    int feature;
    double lo;
    double hi;
    double zero_fraction;
  };

  void walk(const Tree& tree, int index, std::vector<PathFeature>& path) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
    if (node.is_leaf()) {
      leaves_.push_back(make_leaf(path, node.value));
      return;
    }
    for (int side = 0; side < 2; ++side) {
      const int child = side == 0 ? node.left : node.right;
      const double ratio = static_cast<double>(tree.nodes[static_cast<std::size_t>(child)].cover) /
                           static_cast<double>(node.cover);
      auto it = std::find_if(path.begin(), path.end(),
                             [&](const PathFeature& p) { return p.feature == node.feature; });
      const bool added = it == path.end();
      PathFeature saved{};
      if (added) {
        path.push_back({node.feature, -std::numeric_limits<double>::infinity(),
                        std::numeric_limits<double>::infinity(), 1.0});
        it = path.end() - 1;
      } else {
        saved = *it;
      }
      if (side == 0) {
        it->hi = std::min(it->hi, node.threshold);
      } else {
        it->lo = std::max(it->lo, node.threshold);
      }
      it->zero_fraction *= ratio;
      walk(tree, child, path);
      if (added) {
        path.pop_back();
      } else {
        auto again = std::find_if(path.begin(), path.end(),
                                  [&](const PathFeature& p) { return p.feature == node.feature; });
        *again = saved;
      }
    }
  }

  static LeafTable make_leaf(const std::vector<PathFeature>& path, double value) {
    LeafTable leaf;
    const std::size_t d = path.size();
    for (const auto& p : path) {
      leaf.features.push_back(p.feature);
      leaf.lo.push_back(p.lo);
      leaf.hi.push_back(p.hi);
    }
    const std::size_t n_patterns = std::size_t{1} << d;
    // w(s, d) for s = 0..d-1
    std::vector<double> weight(d, 0.0);
    for (std::size_t s = 0; s < d; ++s) {
      double w = 1.0 / static_cast<double>(d);
      for (std::size_t t = 1; t <= s; ++t) {
        w *= static_cast<double>(t) / static_cast<double>(d - t);
      }
      weight[s] = w;
    }
    // Product of zero fractions over each feature mask.
    std::vector<double> zprod(n_patterns, 1.0);
    for (std::size_t mask = 1; mask < n_patterns; ++mask) {
      const auto low = static_cast<std::size_t>(std::countr_zero(mask));
      zprod[mask] = zprod[mask & (mask - 1)] * path[low].zero_fraction;
    }
    const std::size_t full = n_patterns - 1;
    leaf.phi.assign(n_patterns * d, 0.0);
    for (std::size_t pattern = 0; pattern < n_patterns; ++pattern) {
      for (std::size_t i = 0; i < d; ++i) {
        const std::size_t bit = std::size_t{1} << i;
        const double one = (pattern & bit) ? 1.0 : 0.0;
        const std::size_t allowed = pattern & ~bit;
        double total = 0.0;
        // Every subset S of the satisfied features other than i.
        for (std::size_t sub = allowed;; sub = (sub - 1) & allowed) {
          total += weight[static_cast<std::size_t>(std::popcount(sub))] *
                   zprod[full & ~sub & ~bit];
          if (sub == 0) break;
        }
        leaf.phi[pattern * d + i] = value * (one - path[i].zero_fraction) * total;
      }
    }
    return leaf;
  }

  std::vector<LeafTable> leaves_;
};

void check_row(const GbdtModel& model, std::span<const double> row) {
  if (row.size() != model.n_features()) {
    throw Error(ErrorKind::kArityMismatch, "row has " + std::to_string(row.size()) +
                                               " features, model expects " +
                                               std::to_string(model.n_features()));
  }
  for (double v : row) {
    if (std::isnan(v)) throw Error(ErrorKind::kInvalidArgument, "row has a missing feature");
  }
}

double attribution_base(const GbdtModel& model) {
  double expected = 0.0;
  for (const auto& tree : model.trees) expected += tree.expected_value();
  return model.base_score + model.learning_rate * expected;
}

double subset_tree_value(const Tree& tree, std::span<const double> row, std::uint32_t present,
                         int node_index) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_index)];
  if (node.is_leaf()) return node.value;
  if (present & (1U << node.feature)) {
    return subset_tree_value(
        tree, row, present,
        row[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left : node.right);
  }
  const TreeNode& l = tree.nodes[static_cast<std::size_t>(node.left)];
  const TreeNode& r = tree.nodes[static_cast<std::size_t>(node.right)];
  return (static_cast<double>(l.cover) * subset_tree_value(tree, row, present, node.left) +
          static_cast<double>(r.cover) * subset_tree_value(tree, row, present, node.right)) /
         static_cast<double>(node.cover);
}

}  // namespace

double ShapAttribution::total() const {
  return base + std::accumulate(per_feature.begin(), per_feature.end(), 0.0);
}

ShapAttribution tree_shap(const GbdtModel& model, std::span<const double> row) {
  model.validate();
  check_row(model, row);
  const TreeShapExplainer explainer(model);
  return explainer.explain({std::vector<double>(row.begin(), row.end())}).front();
}

TreeShapExplainer::TreeShapExplainer(const GbdtModel& model) : model_(model) {
  model_.validate();
  base_ = attribution_base(model_);
}

std::vector<ShapAttribution> TreeShapExplainer::explain(
    const std::vector<std::vector<double>>& rows) const {
  const std::size_t m = model_.n_features();
  for (const auto& row : rows) check_row(model_, row);
  std::vector<double> phi(rows.size() * m, 0.0);
  for (const auto& tree : model_.trees) {
    const TreeTables tables(tree);
    for (std::size_t r = 0; r < rows.size(); ++r) tables.accumulate(rows[r], phi.data() + r * m);
  }
  std::vector<ShapAttribution> out(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out[r].base = base_;
    out[r].per_feature.assign(phi.begin() + static_cast<std::ptrdiff_t>(r * m),
                              phi.begin() + static_cast<std::ptrdiff_t>((r + 1) * m));
    for (double& v : out[r].per_feature) v *= model_.learning_rate;
  }
  return out;
}

double subset_value(const GbdtModel& model, std::span<const double> row, std::uint32_t present) {
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += subset_tree_value(tree, row, present, 0);
  return model.base_score + model.learning_rate * sum;
}

ShapAttribution brute_shapley(const GbdtModel& model, std::span<const double> row) {
  const int m = static_cast<int>(model.n_features());
  if (m > kMaxBruteForceFeatures) {
    throw Error(ErrorKind::kTooManyFeatures, "brute-force Shapley supports at most " +
                                                 std::to_string(kMaxBruteForceFeatures) +
                                                 " features, model has " + std::to_string(m));
  }
  model.validate();
  check_row(model, row);
  const std::uint32_t n_subsets = 1U << m;
  std::vector<double> value(n_subsets);
  for (std::uint32_t s = 0; s < n_subsets; ++s) value[s] = subset_value(model, row, s);

  // |S|! (M - |S| - 1)! / M!
  std::vector<double> factorial(static_cast<std::size_t>(m) + 1, 1.0);
  for (int i = 1; i <= m; ++i) factorial[static_cast<std::size_t>(i)] = factorial[static_cast<std::size_t>(i - 1)] * i;
  std::vector<double> weight(static_cast<std::size_t>(std::max(m, 1)), 0.0);
  for (int s = 0; s < m; ++s) {
    weight[static_cast<std::size_t>(s)] = factorial[static_cast<std::size_t>(s)] *
                                          factorial[static_cast<std::size_t>(m - s - 1)] /
                                          factorial[static_cast<std::size_t>(m)];
  }

  ShapAttribution out;
  out.base = value[0];
  out.per_feature.assign(static_cast<std::size_t>(m), 0.0);
  for (int j = 0; j < m; ++j) {
    const std::uint32_t bit = 1U << j;
    double phi = 0.0;
    for (std::uint32_t s = 0; s < n_subsets; ++s) {
      if (s & bit) continue;
      const int size = std::popcount(s);
      phi += weight[static_cast<std::size_t>(size)] * (value[s | bit] - value[s]);
    }
    out.per_feature[static_cast<std::size_t>(j)] = phi;
  }
  return out;
}

std::vector<double> mean_abs_shap(const GbdtModel& model, const FeatureTable& table) {
  if (table.feature_names != model.feature_names) {
    throw Error(ErrorKind::kArityMismatch, "table columns differ from the model's features");
  }
  std::vector<std::vector<double>> rows;
  for (const auto& row : table.rows) {
    if (row.complete()) rows.push_back(dense_row(row));
  }
  if (rows.empty()) throw Error(ErrorKind::kEmpty, "mean |SHAP| of a table without complete rows");
  const TreeShapExplainer explainer(model);
  const auto attributions = explainer.explain(rows);
  std::vector<double> mean(model.n_features(), 0.0);
  for (const auto& a : attributions) {
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += std::abs(a.per_feature[j]);
  }
  for (double& v : mean) v /= static_cast<double>(attributions.size());
  return mean;
}

}  // namespace rsrpflow
