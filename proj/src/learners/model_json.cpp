#include "imbtab/learners/model_json.hpp"

#include <string>

#include "imbtab/core/error.hpp"

namespace imbtab::learners {
namespace {

using nlohmann::ordered_json;

ordered_json gbdt_config_to_json(const GbdtConfig& cfg) {
  ordered_json j;
  j["order"] = cfg.order == BoostOrder::second ? "second" : "first";
  j["growth"] = cfg.growth == Growth::depthwise ? "depthwise" : "leafwise";
  j["learning_rate"] = cfg.learning_rate;
  j["n_estimators"] = cfg.n_estimators;
  j["max_depth"] = cfg.max_depth;
  j["num_leaves"] = cfg.num_leaves ? ordered_json(*cfg.num_leaves) : ordered_json(nullptr);
  j["min_child_weight"] = cfg.min_child_weight;
  j["min_samples_split"] = cfg.min_samples_split;
  j["subsample"] = cfg.subsample;
  j["colsample"] = cfg.colsample;
  j["l1_alpha"] = cfg.l1_alpha;
  j["l2_lambda"] = cfg.l2_lambda;
  j["early_stopping_rounds"] = cfg.early_stopping_rounds
                                   ? ordered_json(*cfg.early_stopping_rounds)
                                   : ordered_json(nullptr);
  j["validation_fraction"] = cfg.validation_fraction;
  j["seed"] = cfg.seed;
  return j;
}

GbdtConfig gbdt_config_from_json(const ordered_json& j) {
  GbdtConfig cfg;
  const std::string order = j.at("order");
  if (order != "second" && order != "first") throw Error("unknown order: " + order);
  cfg.order = order == "second" ? BoostOrder::second : BoostOrder::first;
  const std::string growth = j.at("growth");
  if (growth != "depthwise" && growth != "leafwise") {
    throw Error("unknown growth: " + growth);
  }
  cfg.growth = growth == "depthwise" ? Growth::depthwise : Growth::leafwise;
  cfg.learning_rate = j.at("learning_rate");
  cfg.n_estimators = j.at("n_estimators");
  cfg.max_depth = j.at("max_depth");
  if (!j.at("num_leaves").is_null()) cfg.num_leaves = j.at("num_leaves").get<int>();
  cfg.min_child_weight = j.at("min_child_weight");
  cfg.min_samples_split = j.at("min_samples_split");
  cfg.subsample = j.at("subsample");
  cfg.colsample = j.at("colsample");
  cfg.l1_alpha = j.at("l1_alpha");
  cfg.l2_lambda = j.at("l2_lambda");
  if (!j.at("early_stopping_rounds").is_null()) {
    cfg.early_stopping_rounds = j.at("early_stopping_rounds").get<int>();
  }
  cfg.validation_fraction = j.at("validation_fraction");
  cfg.seed = j.at("seed");
  cfg.validate();
  return cfg;
}

ordered_json etc_config_to_json(const EtcConfig& cfg) {
  ordered_json j;
  j["n_estimators"] = cfg.n_estimators;
  j["min_samples_split"] = cfg.min_samples_split;
  j["max_features"] = cfg.max_features ? ordered_json(*cfg.max_features)
                                       : ordered_json("sqrt");
  j["seed"] = cfg.seed;
  return j;
}

EtcConfig etc_config_from_json(const ordered_json& j) {
  EtcConfig cfg;
  cfg.n_estimators = j.at("n_estimators");
  cfg.min_samples_split = j.at("min_samples_split");
  if (!j.at("max_features").is_string()) {
    cfg.max_features = j.at("max_features").get<double>();
  } else if (j.at("max_features") != "sqrt") {
    throw Error("max_features must be a fraction or \"sqrt\"");
  }
  cfg.seed = j.at("seed");
  cfg.validate();
  return cfg;
}

ordered_json tree_to_json(const Tree& tree) {
  ordered_json nodes = ordered_json::array();
  for (const TreeNode& n : tree.nodes) {
    ordered_json node;
    node["feature"] = n.feature;
    node["threshold"] = n.threshold;
    node["left"] = n.left;
    node["right"] = n.right;
    node["value"] = n.value;
    node["p0"] = n.p0;
    node["p1"] = n.p1;
    node["gain"] = n.gain;
    nodes.push_back(std::move(node));
  }
  return nodes;
}

Tree tree_from_json(const ordered_json& nodes, Index n_features) {
  Tree tree;
  const int count = static_cast<int>(nodes.size());
  if (count == 0) throw Error("tree must have at least one node");
  tree.nodes.reserve(nodes.size());
  for (const auto& node : nodes) {
    TreeNode n;
    n.feature = node.at("feature");
    n.threshold = node.at("threshold");
    n.left = node.at("left");
    n.right = node.at("right");
    n.value = node.at("value");
    n.p0 = node.at("p0");
    n.p1 = node.at("p1");
    n.gain = node.at("gain");
    if (n.feature >= n_features) throw Error("node feature out of range");
    if (!n.is_leaf() &&
        (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count)) {
      throw Error("node child index out of range");
    }
    tree.nodes.push_back(n);
  }
  return tree;
}

}  // namespace

ordered_json model_to_json(const TrainedModel& m) {
  ordered_json j;
  if (m.kind == ModelKind::gbdt) {
    j["kind"] = "gbdt";
    j["config"] = gbdt_config_to_json(m.gbdt_config);
  } else {
    j["kind"] = "extra_trees";
    j["config"] = etc_config_to_json(m.etc_config);
  }
  j["base_score"] = m.base_score;
  j["best_iteration"] = m.best_iteration;
  j["n_features"] = m.n_features;
  ordered_json trees = ordered_json::array();
  for (const Tree& tree : m.trees) trees.push_back(tree_to_json(tree));
  j["trees"] = std::move(trees);
  return j;
}

TrainedModel model_from_json(const ordered_json& doc) {
  TrainedModel m;
  const std::string kind = doc.at("kind");
  if (kind == "gbdt") {
    m.kind = ModelKind::gbdt;
    m.gbdt_config = gbdt_config_from_json(doc.at("config"));
  } else if (kind == "extra_trees") {
    m.kind = ModelKind::extra_trees;
    m.etc_config = etc_config_from_json(doc.at("config"));
  } else {
    throw Error("unknown model kind: " + kind);
  }
  m.base_score = doc.at("base_score");
  m.best_iteration = doc.at("best_iteration");
  m.n_features = doc.at("n_features").get<Index>();
  if (m.n_features <= 0) throw Error("n_features must be positive");
  for (const auto& tree : doc.at("trees")) {
    m.trees.push_back(tree_from_json(tree, m.n_features));
  }
  if (m.best_iteration < 0 ||
      static_cast<std::size_t>(m.best_iteration) > m.trees.size()) {
    throw Error("best_iteration out of range");
  }
  return m;
}

}  // namespace imbtab::learners
