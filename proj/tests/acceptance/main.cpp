// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.
#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "apifrag/embedding.hpp"
#include "apifrag/evaluation.hpp"
#include "apifrag/ir.hpp"
#include "apifrag/similarity.hpp"
#include "apifrag/tree.hpp"
#include "apifrag/util.hpp"
#include "apifrag/workspace.hpp"
#include "fixtures.hpp"

namespace {

using namespace apifrag;
using Clock = std::chrono::steady_clock;

constexpr std::size_t kRandomPairs = 1000;
constexpr std::size_t kOracleMaxLength = 5;
constexpr double kSimilaritySeconds = 30.0;
constexpr double kIdentityTolerance = 1e-12;
constexpr double kMetricTolerance = 1e-12;
constexpr double kIrTolerance = 1e-9;
constexpr int kEmbeddingSeeds = 5;
constexpr int kEmbeddingSeedsRequired = 4;
constexpr double kSyntheticMinF = 0.90;
constexpr double kExternalMinF = 0.60;
constexpr double kExternalSeconds = 15 * 60.0;
constexpr const char* kExternalDataEnv = "APIFRAG_MCGILL_DIR";

// Collects the first failed check of one criterion.
class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failure_.empty()) failure_ = what;
  }
  bool ok() const { return failure_.empty(); }
  const std::string& failure() const { return failure_; }

 private:
  std::string failure_;
};

int failures = 0;

void report(const std::string& name, const Check& c, const std::string& detail) {
  if (c.ok()) {
    std::cout << "PASS " << name << ": " << detail << "\n";
  } else {
    ++failures;
    std::cout << "FAIL " << name << ": " << c.failure() << "\n";
  }
  std::cout.flush();
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

std::string random_text(std::mt19937_64& rng) {
  static const std::string alphabet = "abcdefgh ";
  std::string s;
  const auto len = rng() % 16;
  for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
  return s;
}

void similarity_suite() {
  Check c;
  const auto start = Clock::now();

  const std::array kinds = {SimilarityKind::BiGram, SimilarityKind::Levenshtein, SimilarityKind::Jaccard,
                            SimilarityKind::Cosine};
  for (const auto kind : kinds) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(kind) + 7);
    std::vector<TextBlock> corpus;
    for (int i = 0; i < 50; ++i) corpus.push_back(tokenize(random_text(rng)));
    const auto stats = CorpusStats::build(corpus);
    const SimilarityContext ctx{nullptr, &stats};
    const std::string name(to_string(kind));
    for (std::size_t i = 0; i < kRandomPairs; ++i) {
      const auto a = tokenize(random_text(rng));
      const auto b = tokenize(random_text(rng));
      const double ab = text_similarity(kind, a, b, ctx);
      c.require(ab == text_similarity(kind, b, a, ctx), name + " is not symmetric");
      c.require(ab >= 0.0 && ab <= 1.0, name + " left [0, 1]");
      const bool identity_defined = kind != SimilarityKind::Cosine || !stats.vectorize(a).is_zero();
      if (identity_defined) {
        c.require(std::abs(text_similarity(kind, a, a, ctx) - 1.0) <= kIdentityTolerance,
                  name + " identity is not 1");
      }
    }
  }

  std::vector<std::string> strings = {""};
  for (std::size_t begin = 0, len = 1; len <= kOracleMaxLength; ++len) {
    const std::size_t end = strings.size();
    for (std::size_t i = begin; i < end; ++i) {
      if (strings[i].size() != len - 1) continue;
      for (char ch : {'a', 'b', 'c'}) strings.push_back(strings[i] + ch);
    }
    begin = end;
  }
  std::size_t oracle_pairs = 0;
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      c.require(edit_distance(a, b) == testing::naive_edit_distance(a, b),
                "edit distance differs from the recursive oracle on '" + a + "', '" + b + "'");
      ++oracle_pairs;
    }
  }

  c.require(character_bigrams("student") == std::set<std::string>{"st", "tu", "ud", "de", "en", "nt"},
            "bigrams of 'student' are wrong");
  const double elapsed = seconds_since(start);
  c.require(elapsed < kSimilaritySeconds, "took " + fixed(elapsed, 1) + " s");
  report("similarity-suite", c,
         std::to_string(kinds.size()) + " metrics x " + std::to_string(kRandomPairs) + " pairs, " +
             std::to_string(oracle_pairs) + " oracle pairs, " + fixed(elapsed, 2) + " s");
}

void metrics_arithmetic() {
  Check c;
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> d(0, 50);
  std::size_t equal_pr = 0;
  for (std::size_t i = 0; i < kRandomPairs; ++i) {
    ConfusionMatrix cm{d(rng), d(rng), d(rng), d(rng)};
    // Every fourth matrix has fp == fn, so precision equals recall.
    if (i % 4 == 0) cm.fn = cm.fp;
    const auto m = compute_metrics(cm);
    const double p = cm.tp + cm.fp == 0 ? 0.0 : double(cm.tp) / double(cm.tp + cm.fp);
    const double r = cm.tp + cm.fn == 0 ? 0.0 : double(cm.tp) / double(cm.tp + cm.fn);
    const double f = p + r == 0 ? 0.0 : 2 * p * r / (p + r);
    c.require(m.precision == p && m.recall == r, "precision or recall differs from the definition");
    c.require(std::abs(m.f_measure - f) <= kMetricTolerance, "F differs from the definition");
    if (m.precision == m.recall) {
      ++equal_pr;
      c.require(std::abs(m.f_measure - m.precision) <= kMetricTolerance, "P = R but F != P");
    }
  }
  report("metrics-arithmetic", c,
         std::to_string(kRandomPairs) + " matrices, " + std::to_string(equal_pr) + " with P = R");
}

TrainingInstance point(std::initializer_list<double> values, Label label) {
  TrainingInstance t;
  std::size_t i = 0;
  for (double v : values) t.features.values[i++] = v;
  t.label = label;
  return t;
}

void loocv_contract() {
  Check c;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<TrainingInstance> noisy;
  for (int i = 0; i < 31; ++i) {
    const double x = u(rng);
    noisy.push_back(point({x, u(rng)}, x + 0.4 * u(rng) > 0.7 ? Label::Relevant : Label::Irrelevant));
  }
  const auto r = loocv(noisy, {});
  c.require(r.folds == noisy.size(), "fold count differs from n");
  c.require(r.predictions.size() == noisy.size(), "not every pair was predicted");
  c.require(r.matrix.total() == noisy.size(), "matrix total differs from n");

  std::vector<TrainingInstance> separable;
  for (int i = 0; i < 20; ++i) separable.push_back(point({double(i)}, Label::Irrelevant));
  for (int i = 30; i < 50; ++i) separable.push_back(point({double(i)}, Label::Relevant));
  const auto s = loocv(separable, {10, 1, 1});
  const double f = compute_metrics(s.matrix).f_measure;
  c.require(s.folds == 40 && f == 1.0, "separable fixture F = " + fixed(f));
  report("loocv-contract", c, "n = 31 folds/predictions/total match; separable 40-pair F = " + fixed(f));
}

bool splits_decrease_gini(const DecisionTree& tree) {
  return std::all_of(tree.nodes().begin(), tree.nodes().end(),
                     [](const auto& n) { return n.is_leaf() || n.children_impurity < n.impurity; });
}

void decision_tree() {
  Check c;
  std::vector<std::pair<std::string, std::vector<TrainingInstance>>> fixtures;
  fixtures.push_back({"1-D at 0.5", {point({0}, Label::Irrelevant), point({1}, Label::Relevant)}});
  std::vector<TrainingInstance> xor_data;
  for (int k = 0; k < 3; ++k) xor_data.push_back(point({0, 0}, Label::Relevant));
  for (int k = 0; k < 2; ++k) xor_data.push_back(point({1, 1}, Label::Relevant));
  for (int k = 0; k < 2; ++k) xor_data.push_back(point({0, 1}, Label::Irrelevant));
  for (int k = 0; k < 3; ++k) xor_data.push_back(point({1, 0}, Label::Irrelevant));
  fixtures.push_back({"unbalanced XOR", xor_data});
  std::vector<TrainingInstance> regions;
  for (int i = 0; i < 42; ++i) {
    const int x = i % 7;
    const int y = i / 7;
    regions.push_back(point({double(x), double(y)}, (x >= 3 && y >= 2) || x == 0 ? Label::Relevant : Label::Irrelevant));
  }
  fixtures.push_back({"axis-aligned regions", regions});
  std::vector<TrainingInstance> thresholds;
  for (int i = 0; i < 60; ++i) {
    const double a = i % 10;
    const double b = (i * 7) % 13;
    thresholds.push_back(point({a, b, double(i % 3)}, a > 6 || b < 2 ? Label::Relevant : Label::Irrelevant));
  }
  fixtures.push_back({"threshold union", thresholds});

  for (const auto& [name, data] : fixtures) {
    const auto tree = train_tree(data, {20, 1, 1});
    std::size_t correct = 0;
    for (const auto& t : data) correct += tree.predict(t.features) == t.label ? 1 : 0;
    c.require(correct == data.size(), name + ": training accuracy " + std::to_string(correct) + "/" +
                                          std::to_string(data.size()));
    c.require(splits_decrease_gini(tree), name + ": a split does not decrease Gini");
  }

  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> v(0, 5);
  std::vector<TrainingInstance> random;
  for (int i = 0; i < 200; ++i) {
    TrainingInstance t;
    for (auto& x : t.features.values) x = v(rng);
    t.label = t.features.values[1] + v(rng) > 6 ? Label::Relevant : Label::Irrelevant;
    random.push_back(t);
  }
  const TreeConfig config{8, 2, 77};
  const auto first = train_tree(random, config).to_json();
  c.require(first == train_tree(random, config).to_json(), "two runs serialize differently");
  c.require(splits_decrease_gini(train_tree(random, config)), "random data: a split does not decrease Gini");
  report("decision-tree", c,
         std::to_string(fixtures.size()) + " contradiction-free fixtures fit exactly; identical serializations");
}

void embedding_criteria() {
  Check c;
  EmbeddingConfig config;
  config.dimension = 16;
  config.epochs = 5;

  const auto corpus = testing::cooccurrence_corpus(1);
  const testing::TempDir tmp("acceptance_emb");
  train_embeddings(corpus, config).save(tmp / "a.afwv");
  train_embeddings(corpus, config).save(tmp / "b.afwv");
  c.require(read_file(tmp / "a.afwv") == read_file(tmp / "b.afwv"), "model files differ between runs");

  int closer = 0;
  int monotone = 0;
  for (int seed = 1; seed <= kEmbeddingSeeds; ++seed) {
    config.seed = static_cast<std::uint64_t>(seed);
    std::vector<double> losses;
    const auto m = train_embeddings(testing::cooccurrence_corpus(static_cast<std::uint64_t>(seed)), config, &losses);
    const auto sim = [&](const char* x, const char* y) {
      return word2vec_similarity(testing::words({x}), testing::words({y}), m);
    };
    if (sim("alpha", "beta") > sim("alpha", "gamma")) ++closer;
    bool down = losses.size() == config.epochs;
    for (std::size_t i = 1; i < losses.size(); ++i) down = down && losses[i] < losses[i - 1];
    if (down) ++monotone;
  }
  c.require(closer >= kEmbeddingSeedsRequired, "cos(A,B) > cos(A,C) in only " + std::to_string(closer) + " seeds");
  c.require(monotone == kEmbeddingSeeds, "loss not monotone in " + std::to_string(kEmbeddingSeeds - monotone) +
                                             " seeds");
  report("embedding", c,
         "bitwise-equal files; cos(A,B) > cos(A,C) in " + std::to_string(closer) + "/" +
             std::to_string(kEmbeddingSeeds) + " seeds; loss decreasing every epoch in " +
             std::to_string(monotone) + "/" + std::to_string(kEmbeddingSeeds));
}

void ir_baseline() {
  Check c;
  const std::vector<ApiRanking> one = {{"a.A", {0.9, 0.7, 0.4}, 2}};
  const double t1 = threshold_from_rankings(one).threshold;
  c.require(std::abs(t1 - 0.7) <= kIrTolerance, "single-API threshold " + fixed(t1, 12));
  const std::vector<ApiRanking> two = {{"a.A", {0.6, 0.2}, 1}, {"b.B", {0.95, 0.8, 0.1}, 2}};
  const double t2 = threshold_from_rankings(two).threshold;
  c.require(std::abs(t2 - 0.7) <= kIrTolerance, "two-API threshold " + fixed(t2, 12));
  IrModel m;
  m.threshold = 0.7;
  c.require(ir_classify(m, 0.9) == Label::Relevant, "0.9 > 0.7 not Relevant");
  c.require(ir_classify(m, 0.7) == Label::Irrelevant, "similarity equal to the threshold is Relevant");
  c.require(ir_classify(m, std::nextafter(0.7, 1.0)) == Label::Relevant, "just above the threshold is Irrelevant");
  report("ir-baseline", c, "thresholds " + fixed(t1, 12) + " and " + fixed(t2, 12) + "; strict > at 0.7");
}

void rq_harness(const Workspace& ws) {
  Check c;
  const auto& res = ws.resources();
  const auto rq1 = run_rq1(res);
  std::vector<std::string> labels;
  for (const auto& row : rq1.rows) labels.push_back(row.label);
  c.require(labels == std::vector<std::string>{"1", "2", "3", "1+2", "1+3", "2+3", "1+2+3"},
            "rq1 rows are not the seven masks in order");

  std::vector<std::vector<FeatureVector>> matrices;
  const auto rq2 = run_rq2(res, &matrices);
  c.require(rq2.rows.size() == 5 && matrices.size() == 5, "rq2 does not have five rows");
  std::size_t count_features = 0;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    if (is_similarity_feature(f)) continue;
    ++count_features;
    for (std::size_t k = 1; k < matrices.size(); ++k) {
      for (std::size_t i = 0; i < matrices[0].size(); ++i) {
        c.require(std::bit_cast<std::uint64_t>(matrices[k][i].values[f]) ==
                      std::bit_cast<std::uint64_t>(matrices[0][i].values[f]),
                  "feature " + std::string(feature_name(f)) + " changes with the similarity kind");
      }
    }
  }
  c.require(count_features == 14, "expected 14 count features");

  const auto rq3 = run_rq3(res);
  c.require(rq3.rows.size() == 2 && rq3.rows[0].pair_ids == rq3.rows[1].pair_ids &&
                !rq3.rows[0].pair_ids.empty(),
            "rq3 models evaluated on different pairs");
  report("rq-harness", c,
         "rq1 7 rows, rq2 5 rows with " + std::to_string(count_features) + " identical count features, rq3 " +
             std::to_string(rq3.rows[0].pair_ids.size()) + " shared pairs");
}

void synthetic_reproduction(const Workspace& ws) {
  Check c;
  const auto& res = ws.resources();
  const auto all = run_single(res, SimilarityKind::Word2Vec, GroupMask());
  const auto g1 = run_single(res, SimilarityKind::Word2Vec, GroupMask::of({1}));
  const double f_all = all.rows.at(0).macro.f_measure;
  const double f_g1 = g1.rows.at(0).macro.f_measure;
  c.require(ws.dataset().stats.pairs == 200, "synthetic corpus does not have 200 labeled pairs");
  c.require(f_all >= kSyntheticMinF, "macro F with all groups " + fixed(f_all));
  c.require(f_g1 < f_all, "group 1 alone is not lower: " + fixed(f_g1) + " vs " + fixed(f_all));
  report("synthetic-reproduction", c, "macro F all groups " + fixed(f_all) + ", group 1 alone " + fixed(f_g1));
}

void external_reproduction() {
  const char* dir = std::getenv(kExternalDataEnv);
  if (dir == nullptr || *dir == '\0') {
    std::cout << "NOTE external-reproduction: " << kExternalDataEnv
              << " is not set; the public tutorial dataset is not bundled, so this criterion was not run\n";
    return;
  }
  Check c;
  const auto start = Clock::now();
  std::unique_ptr<Workspace> ws;
  try {
    ws = Workspace::open(RunConfig::for_directory(dir), true);
  } catch (const std::exception& e) {
    c.require(false, std::string("cannot load ") + dir + ": " + e.what());
    report("external-reproduction", c, "");
    return;
  }
  const auto rq3 = run_rq3(ws->resources());
  const double f_tree = rq3.rows.at(0).macro.f_measure;
  const double f_ir = rq3.rows.at(1).macro.f_measure;
  const double elapsed = seconds_since(start);
  c.require(f_tree > f_ir, "tree macro F " + fixed(f_tree) + " does not beat IR " + fixed(f_ir));
  c.require(f_tree >= kExternalMinF, "tree macro F " + fixed(f_tree));
  c.require(elapsed < kExternalSeconds, "took " + fixed(elapsed, 0) + " s");
  report("external-reproduction", c,
         "tree macro F " + fixed(f_tree) + ", IR " + fixed(f_ir) + ", " + fixed(elapsed, 1) + " s");
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void()>>> criteria = {
      {"similarity-suite", similarity_suite}, {"metrics-arithmetic", metrics_arithmetic},
      {"loocv-contract", loocv_contract},     {"decision-tree", decision_tree},
      {"embedding", embedding_criteria},      {"ir-baseline", ir_baseline},
  };
  for (const auto& [name, run] : criteria) {
    try {
      run();
    } catch (const std::exception& e) {
      ++failures;
      std::cout << "FAIL " << name << ": exception: " << e.what() << "\n";
    }
  }
  try {
    const auto& ws = testing::synthetic_workspace();
    rq_harness(ws);
    synthetic_reproduction(ws);
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "FAIL synthetic workspace: exception: " << e.what() << "\n";
  }
  try {
    external_reproduction();
  } catch (const std::exception& e) {
    ++failures;
    std::cout << "FAIL external-reproduction: exception: " << e.what() << "\n";
  }
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
