#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "apifrag/error.hpp"
#include "apifrag/tree.hpp"

namespace apifrag {
namespace {

TrainingInstance inst(std::initializer_list<double> values, Label label, GroupMask mask = GroupMask()) {
  TrainingInstance t;
  std::size_t i = 0;
  for (double v : values) t.features.values[i++] = v;
  t.features.mask = mask;
  t.label = label;
  return t;
}

constexpr Label R = Label::Relevant;
constexpr Label I = Label::Irrelevant;

std::vector<TrainingInstance> unbalanced_xor() {
  std::vector<TrainingInstance> v;
  for (int k = 0; k < 3; ++k) v.push_back(inst({0, 0}, R));
  for (int k = 0; k < 2; ++k) v.push_back(inst({1, 1}, R));
  for (int k = 0; k < 2; ++k) v.push_back(inst({0, 1}, I));
  for (int k = 0; k < 3; ++k) v.push_back(inst({1, 0}, I));
  return v;
}

std::vector<TrainingInstance> random_instances(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> small(0, 4);
  std::vector<TrainingInstance> v;
  for (std::size_t i = 0; i < n; ++i) {
    TrainingInstance t;
    for (auto& x : t.features.values) x = small(rng);
    const bool rel = t.features.values[0] + t.features.values[3] > 4 || small(rng) == 0;
    t.label = rel ? R : I;
    v.push_back(t);
  }
  return v;
}

TEST(Gini, Values) {
  EXPECT_DOUBLE_EQ(gini(5, 5), 0.5);
  EXPECT_DOUBLE_EQ(gini(3, 2), 0.48);
  EXPECT_DOUBLE_EQ(gini(4, 0), 0.0);
  EXPECT_DOUBLE_EQ(gini(0, 0), 0.0);
}

TEST(Tree, UnbalancedXorIsLearnedExactly) {
  // Root: feature 0 gives weighted Gini 0.48, feature 1 gives 0.5.
  const auto data = unbalanced_xor();
  const auto tree = train_tree(data, {10, 1, 1});
  ASSERT_EQ(tree.nodes().size(), 7u);
  EXPECT_EQ(tree.nodes()[0].feature, 0);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 0.5);
  EXPECT_NEAR(tree.nodes()[0].children_impurity, 0.48, 1e-12);
  EXPECT_EQ(tree.depth(), 2);
  for (const auto& t : data) EXPECT_EQ(tree.predict(t.features), t.label);
}

TEST(Tree, BalancedXorHasNoImprovingSplit) {
  std::vector<TrainingInstance> data = {inst({0, 0}, R), inst({1, 1}, R), inst({0, 1}, I), inst({1, 0}, I)};
  const auto tree = train_tree(data, {10, 1, 1});
  ASSERT_EQ(tree.nodes().size(), 1u);
  // Tie at the leaf goes to Irrelevant.
  EXPECT_EQ(tree.predict(data[0].features), I);
  EXPECT_DOUBLE_EQ(tree.relevant_fraction(data[0].features), 0.5);
}

TEST(Tree, OneDimensionalSplitAtMidpoint) {
  const auto tree = train_tree(std::vector{inst({0}, I), inst({1}, R)}, {10, 1, 1});
  ASSERT_EQ(tree.nodes().size(), 3u);
  EXPECT_EQ(tree.nodes()[0].feature, 0);
  EXPECT_DOUBLE_EQ(tree.nodes()[0].threshold, 0.5);
  EXPECT_EQ(tree.predict(inst({0.5}, I).features), I);
  EXPECT_EQ(tree.predict(inst({0.51}, I).features), R);
}

TEST(Tree, HandTracedThreeNodes) {
  // Thresholds 1.5 and 10.5 leave one sample on a side; 2.5 scores 4/15; 6.5 scores 0.
  std::vector data = {inst({1}, I), inst({2}, I), inst({3}, I), inst({10}, R), inst({11}, R)};
  const auto tree = train_tree(data, {10, 2, 1});
  ASSERT_EQ(tree.nodes().size(), 3u);
  const auto& root = tree.nodes()[0];
  EXPECT_EQ(root.feature, 0);
  EXPECT_DOUBLE_EQ(root.threshold, 6.5);
  EXPECT_NEAR(root.impurity, 12.0 / 25, 1e-12);
  EXPECT_EQ(root.children_impurity, 0.0);
  const auto& left = tree.nodes()[static_cast<std::size_t>(root.left)];
  const auto& right = tree.nodes()[static_cast<std::size_t>(root.right)];
  EXPECT_EQ(left.irrelevant, 3u);
  EXPECT_EQ(left.relevant, 0u);
  EXPECT_EQ(right.relevant, 2u);
  EXPECT_DOUBLE_EQ(tree.relevant_fraction(inst({7}, I).features), 1.0);
  EXPECT_DOUBLE_EQ(tree.relevant_fraction(inst({5}, I).features), 0.0);
}

TEST(Tree, MinSamplesLeafBlocksSplit) {
  const auto tree = train_tree(std::vector{inst({0}, I), inst({1}, R), inst({2}, R)}, {10, 2, 1});
  EXPECT_EQ(tree.nodes().size(), 1u);
  EXPECT_EQ(tree.predict(inst({0}, I).features), R);
}

TEST(Tree, MaxDepthLimits) {
  const auto data = random_instances(3, 200);
  for (int d : {0, 1, 2, 3}) EXPECT_LE(train_tree(data, {d, 1, 1}).depth(), d);
}

TEST(Tree, TiesPreferLowerFeatureIndex) {
  std::vector data = {inst({0, 0}, I), inst({1, 1}, R)};
  const auto tree = train_tree(data, {10, 1, 1});
  EXPECT_EQ(tree.nodes()[0].feature, 0);
}

TEST(Tree, OnlyEnabledFeaturesAreUsed) {
  const auto g2 = GroupMask::of({2});
  std::vector data = {inst({0, 0, 0, 0, 0, 0, 0, 0, 0}, I, g2), inst({1, 0, 0, 0, 0, 0, 0, 0, 1}, R, g2)};
  const auto tree = train_tree(data, {10, 1, 1});
  EXPECT_EQ(tree.nodes()[0].feature, 8);
  EXPECT_EQ(tree.mask(), g2);
}

TEST(Tree, PredictRejectsVectorWithoutSplitFeature) {
  std::vector data = {inst({0}, I), inst({1}, R)};
  const auto tree = train_tree(data, {10, 1, 1});
  auto fv = inst({1}, I, GroupMask::of({2})).features;
  EXPECT_THROW(tree.predict(fv), InputError);
}

TEST(Tree, TrainingErrors) {
  EXPECT_THROW(train_tree(std::vector<TrainingInstance>{}), InputError);
  EXPECT_THROW(train_tree(std::vector{inst({0}, Label::Unknown)}), InputError);
  EXPECT_THROW(train_tree(std::vector{inst({0}, I), inst({1}, R, GroupMask::of({1}))}), InputError);
}

TEST(Tree, DeterministicAndPermutationInvariant) {
  auto data = random_instances(11, 150);
  const auto a = train_tree(data, {8, 2, 1});
  EXPECT_EQ(a, train_tree(data, {8, 2, 1}));
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(data.begin(), data.end(), rng);
    EXPECT_EQ(a, train_tree(data, {8, 2, 1}));
  }
}

TEST(Tree, StructuralInvariants) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto data = random_instances(seed, 120);
    const std::size_t min_leaf = 1 + seed % 4;
    const auto tree = train_tree(data, {6, min_leaf, seed});
    std::size_t leaf_total = 0;
    for (const auto& n : tree.nodes()) {
      if (n.is_leaf()) {
        EXPECT_GE(n.relevant + n.irrelevant, min_leaf);
        leaf_total += n.relevant + n.irrelevant;
      } else {
        EXPECT_LT(n.children_impurity, n.impurity);
        const auto& l = tree.nodes()[static_cast<std::size_t>(n.left)];
        const auto& r = tree.nodes()[static_cast<std::size_t>(n.right)];
        EXPECT_EQ(l.relevant + r.relevant, n.relevant);
        EXPECT_EQ(l.irrelevant + r.irrelevant, n.irrelevant);
      }
    }
    EXPECT_EQ(leaf_total, data.size());
  }
}

TEST(Tree, AxisAlignedRegionsAreFitExactly) {
  std::vector<TrainingInstance> data;
  for (int i = 0; i < 42; ++i) {
    const int x = i % 7;
    const int y = i / 7;
    data.push_back(inst({double(x), double(y)}, (x >= 3 && y >= 2) || x == 0 ? R : I));
  }
  const auto tree = train_tree(data, {20, 1, 1});
  for (const auto& t : data) EXPECT_EQ(tree.predict(t.features), t.label);
}

TEST(Tree, JsonRoundTrip) {
  const auto tree = train_tree(random_instances(17, 100), {5, 3, 9});
  const auto json = tree.to_json();
  const auto back = DecisionTree::from_json(json);
  EXPECT_EQ(back, tree);
  EXPECT_EQ(back.to_json(), json);
  EXPECT_THROW(DecisionTree::from_json("{}"), InputError);
  EXPECT_THROW(DecisionTree::from_json("not json"), InputError);
}

}  // namespace
}  // namespace apifrag
