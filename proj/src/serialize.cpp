#include "rst/serialize.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace rst {

namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

json params_to_json(const TreeParams& params) {
  json j;
  j["split_strategy"] =
      params.split_strategy == SplitStrategy::Best ? "best" : "random";
  j["min_samples_split"] = params.min_samples_split;
  if (params.max_depth) j["max_depth"] = *params.max_depth;
  j["mtry"] = params.mtry;
  return j;
}

TreeParams params_from_json(const json& j) {
  TreeParams params;
  params.split_strategy = j.at("split_strategy").get<std::string>() == "best"
                              ? SplitStrategy::Best
                              : SplitStrategy::Random;
  params.min_samples_split = j.at("min_samples_split").get<int>();
  if (j.contains("max_depth")) params.max_depth = j.at("max_depth").get<int>();
  params.mtry = j.at("mtry").get<int>();
  return params;
}

json tree_to_json(const DecisionTree& tree) {
  json nodes = json::array();
  for (const TreeNode& node : tree.nodes) {
    json n;
    if (node.is_leaf()) {
      n["counts"] = node.counts;
    } else {
      n["feature"] = node.feature_index;
      n["threshold"] = node.threshold;
      n["left"] = node.left;
      n["right"] = node.right;
    }
    nodes.push_back(std::move(n));
  }
  json j;
  j["num_features"] = tree.num_features;
  j["num_classes"] = tree.num_classes;
  j["params"] = params_to_json(tree.params);
  j["seed"] = tree.seed;
  j["nodes"] = std::move(nodes);
  return j;
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree tree;
  tree.num_features = j.at("num_features").get<int>();
  tree.num_classes = j.at("num_classes").get<int>();
  tree.params = params_from_json(j.at("params"));
  tree.seed = j.at("seed").get<std::uint64_t>();
  for (const json& n : j.at("nodes")) {
    TreeNode node;
    if (n.contains("counts")) {
      node.counts = n.at("counts").get<std::vector<int>>();
    } else {
      node.feature_index = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    }
    tree.nodes.push_back(std::move(node));
  }
  return tree;
}

}  // namespace

std::string ensemble_to_json(const RstEnsemble& ensemble) {
  json j;
  j["format"] = "rst-ensemble";
  j["version"] = kFormatVersion;
  j["raw_features"] = ensemble.raw_features;
  j["num_classes"] = ensemble.num_classes;
  j["series_length"] = ensemble.series_length;

  const RstConfig& c = ensemble.config;
  json config;
  config["n_estimators"] = c.n_estimators;
  config["o_min"] = c.o_min;
  config["o_max"] = c.o_max;
  config["k_min"] = c.k_min;
  config["k_max"] = c.k_max;
  config["split_strategy"] =
      c.split_strategy == SplitStrategy::Best ? "best" : "random";
  config["bootstrap"] = c.bootstrap;
  config["master_seed"] = c.master_seed;
  config["tree_params"] = params_to_json(c.tree_params);
  j["config"] = std::move(config);

  json members = json::array();
  for (const EnsembleMember& member : ensemble.members) {
    json m;
    m["tree_seed"] = member.tree_seed;
    if (member.theta) {
      m["theta"] = {{"order", member.theta->order},
                    {"num_basis", member.theta->num_basis},
                    {"clamped", member.theta->clamped}};
    }
    if (member.basis) {
      m["basis"] = {{"order", member.basis->order},
                    {"num_basis", member.basis->num_basis},
                    {"knots", member.basis->knots}};
    }
    m["tree"] = tree_to_json(member.tree);
    members.push_back(std::move(m));
  }
  j["members"] = std::move(members);
  return j.dump();
}

RstEnsemble ensemble_from_json(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format").get<std::string>() != "rst-ensemble") {
    throw std::runtime_error("ensemble_from_json: not an rst-ensemble file");
  }
  if (j.at("version").get<int>() != kFormatVersion) {
    throw std::runtime_error("ensemble_from_json: unsupported format version");
  }

  RstEnsemble ensemble;
  ensemble.raw_features = j.at("raw_features").get<bool>();
  ensemble.num_classes = j.at("num_classes").get<int>();
  ensemble.series_length = j.at("series_length").get<int>();

  const json& config = j.at("config");
  RstConfig& c = ensemble.config;
  c.n_estimators = config.at("n_estimators").get<int>();
  c.o_min = config.at("o_min").get<int>();
  c.o_max = config.at("o_max").get<int>();
  c.k_min = config.at("k_min").get<int>();
  c.k_max = config.at("k_max").get<int>();
  c.split_strategy = config.at("split_strategy").get<std::string>() == "best"
                         ? SplitStrategy::Best
                         : SplitStrategy::Random;
  c.bootstrap = config.at("bootstrap").get<bool>();
  c.master_seed = config.at("master_seed").get<std::uint64_t>();
  c.tree_params = params_from_json(config.at("tree_params"));

  for (const json& m : j.at("members")) {
    EnsembleMember member;
    member.tree_seed = m.at("tree_seed").get<std::uint64_t>();
    if (m.contains("theta")) {
      const json& t = m.at("theta");
      member.theta = ThetaDraw{t.at("order").get<int>(),
                               t.at("num_basis").get<int>(),
                               t.at("clamped").get<bool>()};
    }
    if (m.contains("basis")) {
      const json& b = m.at("basis");
      BSplineBasis basis;
      basis.order = b.at("order").get<int>();
      basis.num_basis = b.at("num_basis").get<int>();
      basis.knots = b.at("knots").get<std::vector<double>>();
      member.basis = std::move(basis);
    }
    member.tree = tree_from_json(m.at("tree"));
    ensemble.members.push_back(std::move(member));
  }
  return ensemble;
}

void save_ensemble(const RstEnsemble& ensemble, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("save_ensemble: cannot open " + path);
  file << ensemble_to_json(ensemble);
}

RstEnsemble load_ensemble(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("load_ensemble: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(file)),
                   std::istreambuf_iterator<char>());
  return ensemble_from_json(text);
}

}  // namespace rst
