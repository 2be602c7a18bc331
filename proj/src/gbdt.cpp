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

#include "rsrpflow/gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

// Gains below this fraction of the node's sum of squared residuals are
// rounding noise (a constant-residual node evaluates to ~1e-16 relative).
constexpr double kRelativeGainFloor = 1e-12;

// Squared-error reduction of splitting a node with residual sum `total` into
// a left part holding `sum_left`. Counts enter through the reciprocal table so
// the hot loop has no divisions; find_best_split uses the same arithmetic.
double split_gain(double sum_left, double total, double inv_left, double inv_right,
                  double parent_term) {
  const double sum_right = total - sum_left;
  return sum_left * sum_left * inv_left + sum_right * sum_right * inv_right - parent_term;
}

// reciprocal[c] = 1 / c for c in [1, n].
std::vector<double> reciprocals(std::size_t n) {
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t c = 1; c <= n; ++c) out[c] = 1.0 / static_cast<double>(c);
  return out;
}

// Midpoint of two adjacent distinct values that still separates them under
// the `x < threshold` rule.
double midpoint(double lo, double hi) {
  const double mid = lo + (hi - lo) / 2.0;
  return mid > lo ? mid : hi;
}

struct NodeTotals {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::int64_t count = 0;
};

// Rows of one frontier node occupy positions [begin, end) of every feature's
// working arrays, sorted by that feature.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  int node = 0;
};

// Depth-wise exact greedy growth. Each feature keeps its rows in sorted order
// partitioned by frontier node, so a split search is one sequential pass per
// (feature, node) and each split is applied with a stable partition.
class TreeGrower {
 public:
  TreeGrower(const std::vector<std::vector<std::uint32_t>>& order,
             const std::vector<std::vector<double>>& sorted_values, const GbdtParams& params)
      : order_(order),
        sorted_values_(sorted_values),
        params_(params),
        inv_(reciprocals(order.empty() ? 0 : order.front().size())),
        ord_(order.size()),
        vals_(order.size()),
        res_(order.size()) {}

  // Grows one tree on the residuals and writes each row's leaf into row_node.
  Tree grow(std::span<const double> residuals, std::vector<int>& row_node) {
    const std::size_t n = residuals.size();
    const std::size_t n_features = order_.size();
    Tree tree;
    tree.nodes.push_back(TreeNode{.cover = static_cast<std::int64_t>(n)});
    std::fill(row_node.begin(), row_node.end(), 0);
    for (std::size_t f = 0; f < n_features; ++f) {
      ord_[f] = order_[f];
      vals_[f] = sorted_values_[f];
      res_[f].resize(n);
      for (std::size_t k = 0; k < n; ++k) res_[f][k] = residuals[ord_[f][k]];
    }
    goes_left_.assign(n, 0);
    scratch_ord_.resize(n);
    scratch_val_.resize(n);
    scratch_res_.resize(n);

    std::vector<Segment> frontier = {{0, n, 0}};
    const auto min_leaf = static_cast<std::int64_t>(params_.min_samples_leaf);
    for (int depth = 0; depth < params_.max_depth && !frontier.empty(); ++depth) {
      std::vector<Segment> next;
      std::vector<Segment> split_segments;
      std::vector<std::pair<int, std::int64_t>> split_info;  // feature, left count
      for (const Segment& seg : frontier) {
        NodeTotals totals;
        const double* r0 = res_[0].data();
        for (std::size_t k = seg.begin; k < seg.end; ++k) {
          totals.sum += r0[k];
          totals.sum_sq += r0[k] * r0[k];
        }
        totals.count = static_cast<std::int64_t>(seg.end - seg.begin);
        double best_gain = kRelativeGainFloor * totals.sum_sq;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::int64_t best_left = 0;
        const double parent_term =
            totals.sum * totals.sum * inv_[static_cast<std::size_t>(totals.count)];
        const double* inv = inv_.data();
        for (std::size_t f = 0; f < n_features; ++f) {
          const double* vals = vals_[f].data();
          const double* rs = res_[f].data();
          double sum = 0.0;
          std::int64_t count = 0;
          double last = 0.0;
          for (std::size_t k = seg.begin; k < seg.end; ++k) {
            const double v = vals[k];
            if (count >= min_leaf && totals.count - count >= min_leaf && v > last) {
              const double gain = split_gain(sum, totals.sum, inv[count],
                                             inv[totals.count - count], parent_term);
              if (gain > best_gain) {
                best_gain = gain;
                best_feature = static_cast<int>(f);
                best_threshold = midpoint(last, v);
                best_left = count;
              }
            }
            sum += rs[k];
            ++count;
            last = v;
          }
        }
        if (best_feature < 0) continue;
        const int left = static_cast<int>(tree.nodes.size());
        tree.nodes.push_back(TreeNode{.cover = best_left});
        tree.nodes.push_back(TreeNode{.cover = totals.count - best_left});
        TreeNode& parent = tree.nodes[static_cast<std::size_t>(seg.node)];
        parent.feature = best_feature;
        parent.threshold = best_threshold;
        parent.left = left;
        parent.right = left + 1;
        const auto mid = seg.begin + static_cast<std::size_t>(best_left);
        // The split feature's segment is sorted, so its first best_left rows
        // are exactly the rows below the threshold.
        const std::uint32_t* split_ord = ord_[static_cast<std::size_t>(best_feature)].data();
        for (std::size_t k = seg.begin; k < seg.end; ++k) {
          const std::uint32_t i = split_ord[k];
          const bool to_left = k < mid;
          goes_left_[i] = to_left ? 1 : 0;
          row_node[i] = to_left ? left : left + 1;
        }
        split_segments.push_back(seg);
        split_info.emplace_back(best_feature, best_left);
        next.push_back({seg.begin, mid, left});
        next.push_back({mid, seg.end, left + 1});
      }
      if (split_segments.empty()) break;
      if (depth + 1 < params_.max_depth) {
        for (std::size_t f = 0; f < n_features; ++f) {
          for (std::size_t j = 0; j < split_segments.size(); ++j) {
            if (split_info[j].first == static_cast<int>(f)) continue;  // already partitioned
            partition(f, split_segments[j]);
          }
        }
      }
      frontier = std::move(next);
    }

    std::vector<double> leaf_sum(tree.nodes.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) leaf_sum[static_cast<std::size_t>(row_node[i])] += residuals[i];
    for (std::size_t j = 0; j < tree.nodes.size(); ++j) {
      TreeNode& node = tree.nodes[j];
      if (node.is_leaf()) node.value = leaf_sum[j] / static_cast<double>(node.cover);
    }
    return tree;
  }

 private:
  // Stable partition of one segment of feature f by goes_left_.
  void partition(std::size_t f, const Segment& seg) {
    std::uint32_t* ord = ord_[f].data();
    double* vals = vals_[f].data();
    double* rs = res_[f].data();
    std::size_t write = seg.begin;
    std::size_t spill = 0;
    for (std::size_t k = seg.begin; k < seg.end; ++k) {
      const std::uint32_t i = ord[k];
      if (goes_left_[i]) {
        ord[write] = i;
        vals[write] = vals[k];
        rs[write] = rs[k];
        ++write;
      } else {
        scratch_ord_[spill] = i;
        scratch_val_[spill] = vals[k];
        scratch_res_[spill] = rs[k];
        ++spill;
      }
    }
    std::copy_n(scratch_ord_.begin(), spill, ord + write);
    std::copy_n(scratch_val_.begin(), spill, vals + write);
    std::copy_n(scratch_res_.begin(), spill, rs + write);
  }

  const std::vector<std::vector<std::uint32_t>>& order_;
  const std::vector<std::vector<double>>& sorted_values_;
  const GbdtParams& params_;
  std::vector<double> inv_;
  std::vector<std::vector<std::uint32_t>> ord_;
  std::vector<std::vector<double>> vals_;
  std::vector<std::vector<double>> res_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> scratch_ord_;
  std::vector<double> scratch_val_;
  std::vector<double> scratch_res_;
};

}  // namespace

const TreeNode& Tree::leaf_for(std::span<const double> row) const {
  std::size_t j = 0;
  while (!nodes[j].is_leaf()) {
    const TreeNode& node = nodes[j];
    j = static_cast<std::size_t>(row[static_cast<std::size_t>(node.feature)] < node.threshold
                                     ? node.left
                                     : node.right);
  }
  return nodes[j];
}

int Tree::depth() const {
  std::vector<int> level(nodes.size(), 0);
  int deepest = 0;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const TreeNode& node = nodes[j];
    deepest = std::max(deepest, level[j]);
    if (node.is_leaf()) continue;
    level[static_cast<std::size_t>(node.left)] = level[j] + 1;
    level[static_cast<std::size_t>(node.right)] = level[j] + 1;
  }
  return deepest;
}

double Tree::expected_value() const {
  double total = 0.0;
  for (const auto& node : nodes) {
    if (node.is_leaf()) total += node.value * static_cast<double>(node.cover);
  }
  return total / static_cast<double>(nodes.front().cover);
}

void GbdtParams::validate() const {
  if (n_trees < 1 || max_depth < 1 || min_samples_leaf < 1 || !(learning_rate > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "gbdt params must be positive (n_trees, max_depth, min_samples_leaf, "
                "learning_rate)");
  }
  if (max_depth > kMaxTreeDepth) {
    throw Error(ErrorKind::kInvalidArgument,
                "max_depth must be <= " + std::to_string(kMaxTreeDepth));
  }
}

std::string GbdtParams::fingerprint() const {
  Fnv1a h;
  h.update("n_trees=" + std::to_string(n_trees) + ";max_depth=" + std::to_string(max_depth) +
           ";learning_rate=" + format_double(learning_rate) +
           ";min_samples_leaf=" + std::to_string(min_samples_leaf) +
           ";seed=" + std::to_string(seed));
  return h.hex();
}

void GbdtModel::validate() const {
  if (!std::isfinite(base_score) || !(learning_rate > 0.0)) {
    throw Error(ErrorKind::kCorruptFile, "model has invalid base score or learning rate");
  }
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const auto& nodes = trees[t].nodes;
    const std::string where = "tree " + std::to_string(t);
    if (nodes.empty()) throw Error(ErrorKind::kCorruptFile, where + " has no nodes");
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const TreeNode& node = nodes[j];
      if (node.cover < 1) {
        throw Error(ErrorKind::kZeroCover, where + " node " + std::to_string(j) + " has zero cover");
      }
      if (node.is_leaf()) continue;
      const auto in_range = [&](int child) {
        return child > static_cast<int>(j) && child < static_cast<int>(nodes.size());
      };
      if (node.feature >= static_cast<int>(feature_names.size()) || !in_range(node.left) ||
          !in_range(node.right)) {
        throw Error(ErrorKind::kCorruptFile, where + " node " + std::to_string(j) +
                                                 " has an invalid feature or child link");
      }
      const auto covers = nodes[static_cast<std::size_t>(node.left)].cover +
                          nodes[static_cast<std::size_t>(node.right)].cover;
      if (covers != node.cover) {
        throw Error(ErrorKind::kCorruptFile,
                    where + " node " + std::to_string(j) + " cover differs from its children");
      }
    }
  }
}

std::optional<SplitCandidate> find_best_split(std::span<const double> feature_values,
                                              std::span<const double> residuals,
                                              int min_samples_leaf) {
  if (feature_values.size() != residuals.size()) {
    throw Error(ErrorKind::kLengthMismatch, "feature and residual lengths differ");
  }
  const std::size_t n = feature_values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return feature_values[a] < feature_values[b];
  });
  double total = 0.0;
  double total_sq = 0.0;
  for (double r : residuals) {
    total += r;
    total_sq += r * r;
  }
  const auto inv = reciprocals(n);
  const double parent_term = total * total * inv[n];
  std::optional<SplitCandidate> best;
  double best_gain = kRelativeGainFloor * total_sq;
  double left_sum = 0.0;
  const auto min_leaf = static_cast<std::size_t>(min_samples_leaf);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    left_sum += residuals[order[k]];
    const double lo = feature_values[order[k]];
    const double hi = feature_values[order[k + 1]];
    if (!(hi > lo)) continue;
    const std::size_t n_left = k + 1;
    if (n_left < min_leaf || n - n_left < min_leaf) continue;
    const double gain = split_gain(left_sum, total, inv[n_left], inv[n - n_left], parent_term);
    if (gain > best_gain) {
      best_gain = gain;
      best = SplitCandidate{midpoint(lo, hi), gain};
    }
  }
  return best;
}

GbdtModel fit(const FeatureTable& table, const GbdtParams& params) {
  const std::size_t n_features = table.feature_names.size();
  std::vector<std::vector<double>> columns(n_features);
  std::vector<double> labels;
  for (const auto& row : table.rows) {
    if (!row.complete()) continue;
    if (row.features.size() != n_features) {
      throw Error(ErrorKind::kArityMismatch, "row width differs from feature_names");
    }
    for (std::size_t f = 0; f < n_features; ++f) columns[f].push_back(*row.features[f]);
    labels.push_back(static_cast<double>(row.label));
  }
  return fit_columns(columns, labels, table.feature_names, params);
}

GbdtModel fit_columns(const std::vector<std::vector<double>>& columns,
                      std::span<const double> labels, std::vector<std::string> feature_names,
                      const GbdtParams& params) {
  params.validate();
  const std::size_t n = labels.size();
  if (n < 2) {
    throw Error(ErrorKind::kInsufficientRows, "degenerate table: need at least two rows");
  }
  if (n < 2 * static_cast<std::size_t>(params.min_samples_leaf)) {
    throw Error(ErrorKind::kInsufficientRows,
                "need at least 2 * min_samples_leaf complete rows, have " + std::to_string(n));
  }
  if (columns.size() != feature_names.size()) {
    throw Error(ErrorKind::kArityMismatch, "column count differs from feature_names");
  }
  for (const auto& col : columns) {
    if (col.size() != n) throw Error(ErrorKind::kLengthMismatch, "column length differs from labels");
  }

  std::vector<std::vector<std::uint32_t>> order(columns.size());
  std::vector<std::vector<double>> sorted_values(columns.size());
  for (std::size_t f = 0; f < columns.size(); ++f) {
    const auto& col = columns[f];
    auto& ord = order[f];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), 0U);
    std::stable_sort(ord.begin(), ord.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    sorted_values[f].resize(n);
    for (std::size_t k = 0; k < n; ++k) sorted_values[f][k] = col[ord[k]];
  }

  GbdtModel model;
  model.feature_names = std::move(feature_names);
  model.learning_rate = params.learning_rate;
  model.params = params;
  model.params_fingerprint = params.fingerprint();
  model.seed = params.seed;
  model.base_score = std::accumulate(labels.begin(), labels.end(), 0.0) / static_cast<double>(n);

  std::vector<double> residuals(n);
  for (std::size_t i = 0; i < n; ++i) residuals[i] = labels[i] - model.base_score;

  TreeGrower grower(order, sorted_values, params);
  std::vector<int> row_node(n, 0);
  for (int t = 0; t < params.n_trees; ++t) {
    Tree tree = grower.grow(residuals, row_node);
    // A root that cannot split means every later round is identical.
    if (tree.nodes.size() == 1) break;
    for (std::size_t i = 0; i < n; ++i) {
      residuals[i] -= params.learning_rate * tree.nodes[static_cast<std::size_t>(row_node[i])].value;
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

double predict(const GbdtModel& model, std::span<const double> row) {
  if (row.size() != model.n_features()) {
    throw Error(ErrorKind::kArityMismatch, "row has " + std::to_string(row.size()) +
                                               " features, model expects " +
                                               std::to_string(model.n_features()));
  }
  for (double v : row) {
    if (std::isnan(v)) throw Error(ErrorKind::kInvalidArgument, "row has a missing feature");
  }
  double sum = 0.0;
  for (const auto& tree : model.trees) sum += tree.leaf_for(row).value;
  return model.base_score + model.learning_rate * sum;
}

std::vector<double> dense_row(const FeatureRow& row) {
  std::vector<double> out;
  out.reserve(row.features.size());
  for (const auto& v : row.features) {
    if (!v) throw Error(ErrorKind::kInvalidArgument, "row has a missing feature");
    out.push_back(*v);
  }
  return out;
}

}  // namespace rsrpflow
