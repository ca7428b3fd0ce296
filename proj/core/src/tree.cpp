#include "apifrag/tree.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "apifrag/error.hpp"

namespace apifrag {
namespace {

using nlohmann::json;

constexpr double kImprovementEpsilon = 1e-12;

class Builder {
 public:
  Builder(std::span<const TrainingInstance> instances, const TreeConfig& config, GroupMask mask)
      : instances_(instances), config_(config) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      if (mask.enables(f)) features_.push_back(f);
    }
  }

  std::vector<DecisionTree::Node> run() {
    std::vector<std::size_t> all(instances_.size());
    std::iota(all.begin(), all.end(), 0);
    build(all, 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    std::size_t feature = 0;
    double threshold = 0.0;
    double weighted = 0.0;
  };

  int build(const std::vector<std::size_t>& rows, int depth) {
    DecisionTree::Node node;
    for (auto r : rows) (instances_[r].label == Label::Relevant ? node.relevant : node.irrelevant)++;
    node.impurity = gini(node.relevant, node.irrelevant);
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    const bool pure = node.relevant == 0 || node.irrelevant == 0;
    if (pure || depth >= config_.max_depth || rows.size() < 2 * std::max<std::size_t>(config_.min_samples_leaf, 1)) {
      return id;
    }
    const auto split = best_split(rows, node.impurity);
    if (!split) return id;
    if (!(split->weighted < node.impurity)) {
      throw std::logic_error("CART split does not decrease weighted Gini impurity");
    }

    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
    for (auto r : rows) {
      (instances_[r].features.values[split->feature] <= split->threshold ? left : right).push_back(r);
    }
    const int l = build(left, depth + 1);
    const int rr = build(right, depth + 1);
    auto& n = nodes_[static_cast<std::size_t>(id)];
    n.feature = static_cast<int>(split->feature);
    n.threshold = split->threshold;
    n.children_impurity = split->weighted;
    n.left = l;
    n.right = rr;
    return id;
  }

  std::optional<Split> best_split(const std::vector<std::size_t>& rows, double parent_impurity) const {
    std::optional<Split> best;
    const std::size_t n = rows.size();
    const std::size_t min_leaf = std::max<std::size_t>(config_.min_samples_leaf, 1);
    std::size_t total_rel = 0;
    for (auto r : rows) total_rel += instances_[r].label == Label::Relevant ? 1 : 0;

    std::vector<std::pair<double, bool>> column(n);
    for (const std::size_t f : features_) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto& inst = instances_[rows[i]];
        column[i] = {inst.features.values[f], inst.label == Label::Relevant};
      }
      std::sort(column.begin(), column.end());
      std::size_t left_rel = 0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        left_rel += column[i].second ? 1 : 0;
        const double lo = column[i].first;
        const double hi = column[i + 1].first;
        if (!(lo < hi)) continue;
        const std::size_t left_n = i + 1;
        const std::size_t right_n = n - left_n;
        if (left_n < min_leaf || right_n < min_leaf) continue;
        const std::size_t right_rel = total_rel - left_rel;
        const double weighted = (static_cast<double>(left_n) * gini(left_rel, left_n - left_rel) +
                                 static_cast<double>(right_n) * gini(right_rel, right_n - right_rel)) /
                                static_cast<double>(n);
        if (weighted >= parent_impurity - kImprovementEpsilon) continue;
        if (best && weighted >= best->weighted - kImprovementEpsilon) continue;
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = Split{f, threshold, weighted};
      }
    }
    return best;
  }

  std::span<const TrainingInstance> instances_;
  TreeConfig config_;
  std::vector<std::size_t> features_;
  std::vector<DecisionTree::Node> nodes_;
};

Label label_from_json(const std::string& s) {
  const auto label = parse_label(s);
  if (!label || *label == Label::Unknown) throw InputError("bad leaf label in tree JSON: " + s);
  return *label;
}

}  // namespace

double gini(std::size_t relevant, std::size_t irrelevant) {
  const std::size_t n = relevant + irrelevant;
  if (n == 0) return 0.0;
  const double pr = static_cast<double>(relevant) / static_cast<double>(n);
  const double pi = static_cast<double>(irrelevant) / static_cast<double>(n);
  return 1.0 - pr * pr - pi * pi;
}

DecisionTree::DecisionTree(TreeConfig config, GroupMask mask, std::vector<Node> nodes)
    : config_(config), mask_(mask), nodes_(std::move(nodes)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.is_leaf()) continue;
    const auto count = static_cast<int>(nodes_.size());
    if (n.feature >= static_cast<int>(kFeatureCount) || n.left <= static_cast<int>(i) || n.right <= static_cast<int>(i) ||
        n.left >= count || n.right >= count) {
      throw InputError("malformed decision tree node " + std::to_string(i));
    }
  }
}

const DecisionTree::Node& DecisionTree::leaf_for(const FeatureVector& features) const {
  if (nodes_.empty()) throw Error("decision tree is not trained");
  std::size_t at = 0;
  while (!nodes_[at].is_leaf()) {
    const Node& n = nodes_[at];
    const auto f = static_cast<std::size_t>(n.feature);
    if (!features.enabled(f)) {
      throw InputError("feature '" + std::string(feature_name(f)) + "' is missing from the feature vector");
    }
    at = static_cast<std::size_t>(features.values[f] <= n.threshold ? n.left : n.right);
  }
  return nodes_[at];
}

Label DecisionTree::predict(const FeatureVector& features) const { return leaf_for(features).leaf_class(); }

double DecisionTree::relevant_fraction(const FeatureVector& features) const {
  const Node& leaf = leaf_for(features);
  const std::size_t n = leaf.relevant + leaf.irrelevant;
  return n == 0 ? 0.0 : static_cast<double>(leaf.relevant) / static_cast<double>(n);
}

int DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<int> depth(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    deepest = std::max(deepest, depth[i]);
    if (!nodes_[i].is_leaf()) {
      depth[static_cast<std::size_t>(nodes_[i].left)] = depth[i] + 1;
      depth[static_cast<std::size_t>(nodes_[i].right)] = depth[i] + 1;
    }
  }
  return deepest;
}

std::string DecisionTree::to_json() const {
  json nodes = json::array();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    json j;
    j["id"] = i;
    j["counts"] = {{"relevant", n.relevant}, {"irrelevant", n.irrelevant}};
    j["impurity"] = n.impurity;
    if (n.is_leaf()) {
      j["leaf"] = std::string(to_string(n.leaf_class()));
    } else {
      j["feature"] = std::string(feature_name(static_cast<std::size_t>(n.feature)));
      j["feature_index"] = n.feature;
      j["threshold"] = n.threshold;
      j["children_impurity"] = n.children_impurity;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(std::move(j));
  }
  json root;
  root["format"] = "apifrag-decision-tree";
  root["version"] = 1;
  root["config"] = {{"max_depth", config_.max_depth},
                    {"min_samples_leaf", config_.min_samples_leaf},
                    {"criterion", "gini"},
                    {"seed", config_.seed}};
  root["groups"] = mask_.label();
  root["nodes"] = std::move(nodes);
  return root.dump(2);
}

DecisionTree DecisionTree::from_json(std::string_view json_text) {
  try {
    const json root = json::parse(json_text);
    if (root.value("format", "") != "apifrag-decision-tree") throw InputError("not a decision tree document");
    TreeConfig config;
    config.max_depth = root.at("config").at("max_depth").get<int>();
    config.min_samples_leaf = root.at("config").at("min_samples_leaf").get<std::size_t>();
    config.seed = root.at("config").at("seed").get<std::uint64_t>();
    const GroupMask mask = GroupMask::parse(root.at("groups").get<std::string>());
    std::vector<Node> nodes;
    for (const auto& j : root.at("nodes")) {
      Node n;
      n.relevant = j.at("counts").at("relevant").get<std::size_t>();
      n.irrelevant = j.at("counts").at("irrelevant").get<std::size_t>();
      n.impurity = j.at("impurity").get<double>();
      if (j.contains("leaf")) {
        if (label_from_json(j.at("leaf").get<std::string>()) != n.leaf_class()) {
          throw InputError("leaf label disagrees with its counts");
        }
      } else {
        n.feature = j.at("feature_index").get<int>();
        n.threshold = j.at("threshold").get<double>();
        n.children_impurity = j.at("children_impurity").get<double>();
        n.left = j.at("left").get<int>();
        n.right = j.at("right").get<int>();
      }
      nodes.push_back(n);
    }
    return DecisionTree(config, mask, std::move(nodes));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed decision tree JSON: ") + e.what());
  }
}

DecisionTree train_tree(std::span<const TrainingInstance> instances, const TreeConfig& config) {
  if (instances.empty()) throw InputError("cannot train a decision tree on zero instances");
  const GroupMask mask = instances.front().features.mask;
  for (const auto& inst : instances) {
    if (inst.label == Label::Unknown) throw InputError("training instances must be labeled");
    if (!(inst.features.mask == mask)) throw InputError("training instances use different feature groups");
  }
  Builder builder(instances, config, mask);
  return DecisionTree(config, mask, builder.run());
}

}  // namespace apifrag
