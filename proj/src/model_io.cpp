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

#include "rsrpflow/model_io.hpp"

#include <optional>
#include <vector>

#include <json.hpp>

#include "rsrpflow/error.hpp"
#include "rsrpflow/text.hpp"

namespace rsrpflow {

namespace {

using nlohmann::json;

json node_to_json(const Tree& tree, int index) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(index)];
  json out;
  out["id"] = index;
  out["cover"] = node.cover;
  if (node.is_leaf()) {
    out["value"] = node.value;
    return out;
  }
  out["feature"] = node.feature;
  out["threshold"] = node.threshold;
  out["left"] = node_to_json(tree, node.left);
  out["right"] = node_to_json(tree, node.right);
  return out;
}

// Each node goes back to the slot named by its id, so node order survives
// the round trip.
int node_from_json(const json& j, std::vector<std::optional<TreeNode>>& slots) {
  const int id = j.at("id").get<int>();
  if (id < 0 || id > 1 << 20) throw Error(ErrorKind::kCorruptFile, "node id out of range");
  if (static_cast<std::size_t>(id) >= slots.size()) slots.resize(static_cast<std::size_t>(id) + 1);
  if (slots[static_cast<std::size_t>(id)]) {
    throw Error(ErrorKind::kCorruptFile, "duplicate node id " + std::to_string(id));
  }
  TreeNode node;
  node.cover = j.at("cover").get<std::int64_t>();
  if (j.contains("feature")) {
    node.feature = j.at("feature").get<int>();
    if (node.feature < 0) throw Error(ErrorKind::kCorruptFile, "negative feature index");
    node.threshold = j.at("threshold").get<double>();
    slots[static_cast<std::size_t>(id)] = node;
    node.left = node_from_json(j.at("left"), slots);
    node.right = node_from_json(j.at("right"), slots);
  } else {
    node.value = j.at("value").get<double>();
  }
  slots[static_cast<std::size_t>(id)] = node;
  return id;
}

Tree tree_from_json(const json& j) {
  std::vector<std::optional<TreeNode>> slots;
  if (node_from_json(j, slots) != 0) throw Error(ErrorKind::kCorruptFile, "root node id is not 0");
  Tree tree;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i]) throw Error(ErrorKind::kCorruptFile, "missing node id " + std::to_string(i));
    tree.nodes.push_back(*slots[i]);
  }
  return tree;
}

}  // namespace

std::string model_to_json(const GbdtModel& model) {
  json doc;
  doc["schema"] = kModelSchema;
  doc["version"] = kModelVersion;
  doc["params"] = {
      {"n_trees", model.params.n_trees},
      {"max_depth", model.params.max_depth},
      {"learning_rate", model.params.learning_rate},
      {"min_samples_leaf", model.params.min_samples_leaf},
      {"seed", model.params.seed},
  };
  doc["params_fingerprint"] = model.params_fingerprint;
  doc["seed"] = model.seed;
  doc["base_score"] = model.base_score;
  doc["learning_rate"] = model.learning_rate;
  doc["feature_names"] = model.feature_names;
  json trees = json::array();
  for (const auto& tree : model.trees) trees.push_back(node_to_json(tree, 0));
  doc["trees"] = std::move(trees);
  return doc.dump(1) + "\n";
}

GbdtModel model_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kCorruptFile, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.at("schema").get<std::string>() != kModelSchema) {
      throw Error(ErrorKind::kCorruptFile, "not a gbdt model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelVersion) {
      throw Error(ErrorKind::kVersionMismatch, "model version " + std::to_string(version) +
                                                   " unsupported (expected " +
                                                   std::to_string(kModelVersion) + ")");
    }
    GbdtModel model;
    const json& p = doc.at("params");
    model.params.n_trees = p.at("n_trees").get<int>();
    model.params.max_depth = p.at("max_depth").get<int>();
    model.params.learning_rate = p.at("learning_rate").get<double>();
    model.params.min_samples_leaf = p.at("min_samples_leaf").get<int>();
    model.params.seed = p.at("seed").get<std::uint64_t>();
    model.params_fingerprint = doc.at("params_fingerprint").get<std::string>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.base_score = doc.at("base_score").get<double>();
    model.learning_rate = doc.at("learning_rate").get<double>();
    model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& t : doc.at("trees")) {
      model.trees.push_back(tree_from_json(t));
    }
    model.validate();
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kCorruptFile, std::string("model file is malformed: ") + e.what());
  }
}

void save_model(const GbdtModel& model, const std::filesystem::path& path) {
  write_file(path, model_to_json(model));
}

GbdtModel load_model(const std::filesystem::path& path) { return model_from_json(read_file(path)); }

}  // namespace rsrpflow
