#include "apifrag/evaluation.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>
#include <json.hpp>

#include "apifrag/error.hpp"
#include "apifrag/ir.hpp"
#include "apifrag/util.hpp"

namespace apifrag {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ordered_json metrics_json(const Metrics& m) {
  return ordered_json{{"precision", m.precision}, {"recall", m.recall}, {"f_measure", m.f_measure}};
}

ordered_json matrix_json(const ConfusionMatrix& cm) {
  return ordered_json{{"tp", cm.tp}, {"fp", cm.fp}, {"fn", cm.fn}, {"tn", cm.tn}};
}

void finish_row(ReportRow& row) {
  row.pooled = {};
  Metrics sum;
  for (const auto& t : row.tutorials) {
    row.pooled += t.matrix;
    sum.precision += t.metrics.precision;
    sum.recall += t.metrics.recall;
    sum.f_measure += t.metrics.f_measure;
  }
  const double n = static_cast<double>(std::max<std::size_t>(row.tutorials.size(), 1));
  row.macro = {sum.precision / n, sum.recall / n, sum.f_measure / n};
  row.pooled_metrics = compute_metrics(row.pooled);
}

ExperimentReport make_report(const PipelineResources& resources, std::string experiment) {
  ExperimentReport report;
  report.experiment = std::move(experiment);
  report.config = resources.snapshot;
  report.config["tree.max_depth"] = std::to_string(resources.tree.max_depth);
  report.config["tree.min_samples_leaf"] = std::to_string(resources.tree.min_samples_leaf);
  report.config["tree.seed"] = std::to_string(resources.tree.seed);
  report.config["tree.criterion"] = "gini";
  if (resources.dataset != nullptr) report.config["dataset"] = resources.dataset->name;
  if (resources.embeddings != nullptr) {
    const auto& c = resources.embeddings->config();
    report.config["embedding.dimension"] = std::to_string(c.dimension);
    report.config["embedding.seed"] = std::to_string(c.seed);
    report.config["embedding.epochs"] = std::to_string(c.epochs);
  }
  report.config["stopwords.count"] = std::to_string(resources.normalization.stopwords.size());
  std::string words;
  for (const auto& w : resources.normalization.stopwords) words += w + "\n";
  report.config["stopwords.hash"] = hex64(fnv1a(words));
  report.config["stemming"] = resources.normalization.stemming_enabled ? "on" : "off";
  report.notes.push_back("Metrics with a zero denominator are reported as 0.");
  report.notes.push_back("Each tutorial is evaluated separately; 'macro' averages per-tutorial metrics and "
                         "'pooled' sums the confusion matrices.");
  return report;
}

}  // namespace

void ConfusionMatrix::add(Label predicted, Label actual) {
  const bool p = predicted == Label::Relevant;
  const bool a = actual == Label::Relevant;
  if (p && a) ++tp;
  else if (p && !a) ++fp;
  else if (!p && a) ++fn;
  else ++tn;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  tn += other.tn;
  return *this;
}

Metrics compute_metrics(const ConfusionMatrix& cm) {
  Metrics m;
  m.precision = safe_ratio(cm.tp, cm.tp + cm.fp);
  m.recall = safe_ratio(cm.tp, cm.tp + cm.fn);
  const double denom = m.precision + m.recall;
  m.f_measure = denom == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / denom;
  return m;
}

LoocvResult loocv(std::span<const TrainingInstance> instances, const TreeConfig& config) {
  if (instances.size() < 2) throw InputError("leave-one-out needs at least 2 labeled pairs");
  LoocvResult result;
  result.predictions.resize(instances.size(), Label::Unknown);
  std::vector<TrainingInstance> training;
  training.reserve(instances.size() - 1);
  for (std::size_t held_out = 0; held_out < instances.size(); ++held_out) {
    training.clear();
    for (std::size_t i = 0; i < instances.size(); ++i) {
      if (i != held_out) training.push_back(instances[i]);
    }
    const DecisionTree tree = train_tree(training, config);
    const Label predicted = tree.predict(instances[held_out].features);
    result.predictions[held_out] = predicted;
    result.matrix.add(predicted, instances[held_out].label);
    ++result.folds;
  }
  return result;
}

FeatureVector apply_mask(const FeatureVector& fv, GroupMask mask) {
  FeatureVector out = fv;
  out.mask = mask;
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (!mask.enables(i)) out.values[i] = 0.0;
  }
  return out;
}

std::string pair_id(const ApiFragmentPair& pair) {
  return pair.tutorial_id + "/" + pair.fragment_id + "/" + pair.api.fqn;
}

std::vector<FeatureVector> labeled_features(const PipelineResources& resources, SimilarityKind kind) {
  if (resources.dataset == nullptr) throw Error("pipeline has no dataset");
  return extract_features(*resources.dataset, resources.dataset->labeled_pair_indices(),
                          resources.feature_resources(), kind, GroupMask());
}

ReportRow evaluate_classifier(const PipelineResources& resources, const std::vector<FeatureVector>& features,
                              GroupMask mask, std::string label, std::vector<std::string>* notes) {
  const Dataset& dataset = *resources.dataset;
  const auto labeled = dataset.labeled_pair_indices();
  if (features.size() != labeled.size()) throw Error("feature matrix does not match the labeled pairs");
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < labeled.size(); ++r) row_of.emplace(labeled[r], r);

  ReportRow row;
  row.label = std::move(label);
  for (const auto& [tutorial_id, indices] : dataset.labeled_pairs_by_tutorial()) {
    if (indices.size() < 2) {
      if (notes != nullptr) notes->push_back("tutorial " + tutorial_id + " skipped: fewer than 2 labeled pairs");
      continue;
    }
    std::vector<TrainingInstance> instances;
    for (const std::size_t i : indices) {
      instances.push_back({apply_mask(features[row_of.at(i)], mask), dataset.pairs[i].label});
      row.pair_ids.push_back(pair_id(dataset.pairs[i]));
    }
    const LoocvResult result = loocv(instances, resources.tree);
    row.tutorials.push_back({tutorial_id, result.matrix, compute_metrics(result.matrix)});
  }
  finish_row(row);
  return row;
}

ReportRow evaluate_ir(const PipelineResources& resources, std::vector<std::string>* notes) {
  const Dataset& dataset = *resources.dataset;
  if (resources.knowledge == nullptr) throw InputError("the IR baseline needs API specification descriptions");
  const SpecMap& spec = resources.knowledge->spec;
  ReportRow row;
  row.label = "IR";
  for (const auto& [tutorial_id, indices] : dataset.labeled_pairs_by_tutorial()) {
    if (indices.size() < 2) {
      if (notes != nullptr) notes->push_back("tutorial " + tutorial_id + " skipped: fewer than 2 labeled pairs");
      continue;
    }
    std::vector<double> similarities;
    for (const std::size_t i : indices) {
      const auto& pair = dataset.pairs[i];
      similarities.push_back(ir_similarity(pair.api, dataset.fragment_of(pair), spec, resources.fragment_stats));
    }
    IrModel model;
    try {
      model = ir_threshold(dataset, indices, spec, resources.fragment_stats);
    } catch (const InputError& e) {
      // No relevant pair: nothing can be retrieved, every pair is Irrelevant.
      if (notes != nullptr) notes->push_back("tutorial " + tutorial_id + ": " + e.what());
      model.threshold = std::numeric_limits<double>::infinity();
    }
    ConfusionMatrix cm;
    for (std::size_t k = 0; k < indices.size(); ++k) {
      const auto& pair = dataset.pairs[indices[k]];
      cm.add(ir_classify(model, similarities[k]), pair.label);
      row.pair_ids.push_back(pair_id(pair));
    }
    row.tutorials.push_back({tutorial_id, cm, compute_metrics(cm)});
  }
  finish_row(row);
  return row;
}

ExperimentReport run_single(const PipelineResources& resources, SimilarityKind kind, GroupMask mask) {
  ExperimentReport report = make_report(resources, "single");
  report.config["similarity"] = std::string(to_string(kind));
  report.config["groups"] = mask.label();
  const auto features = labeled_features(resources, kind);
  report.rows.push_back(evaluate_classifier(resources, features, mask, mask.label(), &report.notes));
  return report;
}

ExperimentReport run_rq1(const PipelineResources& resources) {
  ExperimentReport report = make_report(resources, "rq1");
  report.config["similarity"] = std::string(to_string(SimilarityKind::Word2Vec));
  const auto features = labeled_features(resources, SimilarityKind::Word2Vec);
  for (const GroupMask& mask : ablation_masks()) {
    std::vector<std::string> notes;
    report.rows.push_back(evaluate_classifier(resources, features, mask, mask.label(), &notes));
    if (report.rows.size() == 1) report.notes.insert(report.notes.end(), notes.begin(), notes.end());
  }
  return report;
}

ExperimentReport run_rq2(const PipelineResources& resources, std::vector<std::vector<FeatureVector>>* matrices) {
  ExperimentReport report = make_report(resources, "rq2");
  report.config["groups"] = GroupMask().label();
  if (matrices != nullptr) matrices->clear();
  for (const SimilarityKind kind : kAllSimilarityKinds) {
    auto features = labeled_features(resources, kind);
    std::vector<std::string> notes;
    report.rows.push_back(evaluate_classifier(resources, features, GroupMask(), std::string(to_string(kind)), &notes));
    if (report.rows.size() == 1) report.notes.insert(report.notes.end(), notes.begin(), notes.end());
    if (matrices != nullptr) matrices->push_back(std::move(features));
  }
  return report;
}

ExperimentReport run_rq3(const PipelineResources& resources) {
  ExperimentReport report = make_report(resources, "rq3");
  report.config["similarity"] = std::string(to_string(SimilarityKind::Word2Vec));
  report.config["groups"] = GroupMask().label();
  const auto features = labeled_features(resources, SimilarityKind::Word2Vec);
  report.rows.push_back(evaluate_classifier(resources, features, GroupMask(), "tree", &report.notes));
  std::vector<std::string> ir_notes;
  report.rows.push_back(evaluate_ir(resources, &ir_notes));
  for (auto& n : ir_notes) report.notes.push_back("IR: " + n);
  report.notes.push_back("The IR threshold uses each tutorial's gold labels to choose N.");
  if (report.rows[0].pair_ids != report.rows[1].pair_ids) throw Error("models were evaluated on different pairs");
  return report;
}

std::string ExperimentReport::to_json() const {
  ordered_json root;
  root["experiment"] = experiment;
  ordered_json cfg = ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  root["config"] = std::move(cfg);
  ordered_json rows_json = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json r;
    r["label"] = row.label;
    ordered_json tutorials = ordered_json::array();
    for (const auto& t : row.tutorials) {
      tutorials.push_back(ordered_json{{"tutorial", t.tutorial_id},
                                       {"matrix", matrix_json(t.matrix)},
                                       {"metrics", metrics_json(t.metrics)}});
    }
    r["tutorials"] = std::move(tutorials);
    r["macro"] = metrics_json(row.macro);
    r["pooled"] = ordered_json{{"matrix", matrix_json(row.pooled)}, {"metrics", metrics_json(row.pooled_metrics)}};
    r["pairs"] = row.pair_ids.size();
    rows_json.push_back(std::move(r));
  }
  root["rows"] = std::move(rows_json);
  root["notes"] = notes;
  return root.dump(2) + "\n";
}

std::string ExperimentReport::to_table() const {
  std::vector<std::string> tutorials;
  for (const auto& row : rows) {
    for (const auto& t : row.tutorials) {
      if (std::find(tutorials.begin(), tutorials.end(), t.tutorial_id) == tutorials.end()) {
        tutorials.push_back(t.tutorial_id);
      }
    }
  }
  const auto cell = [](const Metrics& m) {
    return fmt::format("{:6.2f} {:6.2f} {:6.2f}", 100.0 * m.precision, 100.0 * m.recall, 100.0 * m.f_measure);
  };
  constexpr int kCellWidth = 20;
  std::size_t label_width = 6;
  for (const auto& row : rows) label_width = std::max(label_width, row.label.size());

  std::string out = fmt::format("{} ({} rows)\n", experiment, rows.size());
  out += fmt::format("{:<{}}", "", label_width);
  for (const auto& t : tutorials) out += fmt::format(" | {:^{}}", t.substr(0, kCellWidth), kCellWidth);
  out += fmt::format(" | {:^{}} | {:^{}}\n", "macro", kCellWidth, "pooled", kCellWidth);
  out += fmt::format("{:<{}}", "", label_width);
  for (std::size_t i = 0; i < tutorials.size() + 2; ++i) out += fmt::format(" | {:^{}}", "P      R      F", kCellWidth);
  out += "\n";
  for (const auto& row : rows) {
    out += fmt::format("{:<{}}", row.label, label_width);
    for (const auto& t : tutorials) {
      const auto it = std::find_if(row.tutorials.begin(), row.tutorials.end(),
                                   [&](const TutorialResult& r) { return r.tutorial_id == t; });
      out += fmt::format(" | {:<{}}", it == row.tutorials.end() ? std::string("-") : cell(it->metrics), kCellWidth);
    }
    out += fmt::format(" | {:<{}} | {:<{}}\n", cell(row.macro), kCellWidth, cell(row.pooled_metrics), kCellWidth);
  }
  for (const auto& n : notes) out += "note: " + n + "\n";
  return out;
}

}  // namespace apifrag
