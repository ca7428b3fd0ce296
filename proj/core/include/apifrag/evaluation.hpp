#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/features.hpp"
#include "apifrag/pipeline.hpp"
#include "apifrag/similarity.hpp"
#include "apifrag/tree.hpp"

namespace apifrag {

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  /// Relevant is the positive class.
  void add(Label predicted, Label actual);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
};

/// Precision TP/(TP+FP), recall TP/(TP+FN), F = 2PR/(P+R). A zero
/// denominator makes that metric 0.
Metrics compute_metrics(const ConfusionMatrix& cm);

struct LoocvResult {
  ConfusionMatrix matrix;
  /// predictions[i] is the held-out prediction for instance i.
  std::vector<Label> predictions;
  std::size_t folds = 0;
};

/// Leave-one-out: for each instance, trains on all the others and predicts
/// it. Throws InputError with fewer than 2 instances.
LoocvResult loocv(std::span<const TrainingInstance> instances, const TreeConfig& config);

/// Copy of `fv` restricted to `mask`: other groups zeroed and excluded.
FeatureVector apply_mask(const FeatureVector& fv, GroupMask mask);

struct TutorialResult {
  std::string tutorial_id;
  ConfusionMatrix matrix;
  Metrics metrics;
};

struct ReportRow {
  std::string label;
  std::vector<TutorialResult> tutorials;
  /// Unweighted mean over tutorials of P, R and F.
  Metrics macro;
  ConfusionMatrix pooled;
  Metrics pooled_metrics;
  /// "tutorial/fragment/fqn" of every evaluated pair, in evaluation order.
  std::vector<std::string> pair_ids;
};

struct ExperimentReport {
  std::string experiment;
  std::vector<ReportRow> rows;
  std::map<std::string, std::string> config;
  std::vector<std::string> notes;

  /// Stable key order and number formatting: identical inputs give
  /// byte-identical output.
  std::string to_json() const;
  /// Aligned table, one row per configuration and P/R/F (in percent) per tutorial.
  std::string to_table() const;
};

/// Features for every labeled pair of the dataset with one similarity kind,
/// all groups enabled, in Dataset::labeled_pair_indices() order.
std::vector<FeatureVector> labeled_features(const PipelineResources& resources, SimilarityKind kind);

/// Per-tutorial LOOCV of the decision tree on precomputed features (indexed
/// like labeled_pair_indices()).
ReportRow evaluate_classifier(const PipelineResources& resources, const std::vector<FeatureVector>& features,
                              GroupMask mask, std::string label, std::vector<std::string>* notes = nullptr);

/// Per-tutorial IR baseline with a threshold fitted on each tutorial's labels.
ReportRow evaluate_ir(const PipelineResources& resources, std::vector<std::string>* notes = nullptr);

ExperimentReport run_single(const PipelineResources& resources, SimilarityKind kind, GroupMask mask);
/// Seven rows, one per ablation_masks() entry, with Word2Vec similarity.
ExperimentReport run_rq1(const PipelineResources& resources);
/// Five rows, one per similarity kind, all groups. `matrices`, when given,
/// receives the feature matrix of each kind in kAllSimilarityKinds order.
ExperimentReport run_rq2(const PipelineResources& resources,
                         std::vector<std::vector<FeatureVector>>* matrices = nullptr);
/// Two rows: the decision tree on all features and the IR baseline.
ExperimentReport run_rq3(const PipelineResources& resources);

std::string pair_id(const ApiFragmentPair& pair);

}  // namespace apifrag
