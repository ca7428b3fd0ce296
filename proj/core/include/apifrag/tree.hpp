#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/features.hpp"

namespace apifrag {

struct TreeConfig {
  int max_depth = 10;
  std::size_t min_samples_leaf = 2;
  /// Recorded for reproducibility; CART as implemented here draws no randomness.
  std::uint64_t seed = 1;

  friend bool operator==(const TreeConfig&, const TreeConfig&) = default;
};

struct TrainingInstance {
  FeatureVector features;
  Label label = Label::Irrelevant;
};

/// Binary CART classifier on Gini impurity. A sample goes left when
/// `value <= threshold`.
class DecisionTree {
 public:
  struct Node {
    /// -1 for leaves.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t relevant = 0;
    std::size_t irrelevant = 0;
    /// Gini of this node and, for splits, the weighted Gini of its children.
    double impurity = 0.0;
    double children_impurity = 0.0;

    bool is_leaf() const noexcept { return feature < 0; }
    /// Majority class; a tie is Irrelevant.
    Label leaf_class() const noexcept { return relevant > irrelevant ? Label::Relevant : Label::Irrelevant; }
    friend bool operator==(const Node&, const Node&) = default;
  };

  DecisionTree() = default;
  DecisionTree(TreeConfig config, GroupMask mask, std::vector<Node> nodes);

  /// Throws InputError if the tree splits on a feature the vector excludes.
  Label predict(const FeatureVector& features) const;
  const Node& leaf_for(const FeatureVector& features) const;
  /// Fraction of Relevant training samples in the leaf reached.
  double relevant_fraction(const FeatureVector& features) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  const TreeConfig& config() const noexcept { return config_; }
  GroupMask mask() const noexcept { return mask_; }
  int depth() const;

  /// Human-readable JSON; from_json() restores an equal tree.
  std::string to_json() const;
  static DecisionTree from_json(std::string_view json_text);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  TreeConfig config_;
  GroupMask mask_;
  std::vector<Node> nodes_;
};

/// Gini impurity 1 - p_r^2 - p_i^2; 0 for an empty node.
double gini(std::size_t relevant, std::size_t irrelevant);

/// Greedy CART. Candidate thresholds are midpoints between consecutive
/// distinct values of each enabled feature; the lowest weighted Gini wins,
/// ties going to the lower feature index and then the lower threshold. A
/// split is made only if it strictly lowers the weighted Gini and leaves at
/// least min_samples_leaf samples per side. All instances must share one
/// group mask; Unknown labels and empty input are InputErrors.
DecisionTree train_tree(std::span<const TrainingInstance> instances, const TreeConfig& config = {});

}  // namespace apifrag
