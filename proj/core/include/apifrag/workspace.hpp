#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/embedding.hpp"
#include "apifrag/features.hpp"
#include "apifrag/knowledge.hpp"
#include "apifrag/pipeline.hpp"
#include "apifrag/similarity.hpp"
#include "apifrag/tree.hpp"

namespace apifrag {

struct RunConfig {
  std::filesystem::path tutorials;
  std::filesystem::path labels;
  std::filesystem::path known_apis;
  /// Optional; without it the crowd features are 0.
  std::filesystem::path qa_corpus;
  std::filesystem::path spec_file;
  /// Empty disables caching.
  std::filesystem::path cache_dir;
  std::filesystem::path out_dir = "out";
  int split_level = kMaxHeadingLevel;
  SimilarityKind sim_kind = SimilarityKind::Word2Vec;
  GroupMask mask;
  TreeConfig tree;
  EmbeddingConfig embedding;

  /// `dir/tutorials`, `dir/labels.csv`, `dir/known_apis.txt`, `dir/qa.jsonl`
  /// (if present) and `dir/spec.json`.
  static RunConfig for_directory(const std::filesystem::path& dir);

  /// Throws InputError naming the first missing input.
  void validate() const;
  /// Every field as text, for reports.
  std::map<std::string, std::string> to_map() const;
};

/// Hash of the input file contents and the ingestion settings.
std::string input_hash(const RunConfig& config);
/// input_hash() plus the embedding configuration.
std::string embedding_hash(const RunConfig& config);

/// Deterministic JSON form of a dataset, tagged with the hash that produced it.
std::string dataset_to_json(const Dataset& dataset, std::string_view config_hash);

struct Recommendation {
  std::string fragment_id;
  std::string title;
  /// Relevant fraction of the leaf reached.
  double confidence = 0.0;
};

/// Loaded inputs plus the derived resources an experiment needs. Not movable:
/// resources() points into the workspace.
class Workspace {
 public:
  /// Loads and indexes all inputs. Embeddings are trained only when
  /// `with_embeddings`; with a cache directory they are read from
  /// `embeddings-<hash>.afwv` when valid and rebuilt otherwise. Cache
  /// problems are reported through `warnings`.
  static std::unique_ptr<Workspace> open(const RunConfig& config, bool with_embeddings,
                                         std::vector<std::string>* warnings = nullptr);

  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;

  const RunConfig& config() const noexcept { return config_; }
  const Dataset& dataset() const noexcept { return dataset_; }
  const KnownApis& known_apis() const noexcept { return known_; }
  const QaIndex* qa_index() const noexcept { return qa_ ? &*qa_ : nullptr; }
  const KnowledgeBase& knowledge() const noexcept { return knowledge_; }
  const EmbeddingModel* embeddings() const noexcept { return embeddings_ ? &*embeddings_ : nullptr; }
  bool embeddings_from_cache() const noexcept { return embeddings_cached_; }
  const PipelineResources& resources() const noexcept { return resources_; }

  /// Tree trained on every labeled pair with the configured similarity and mask.
  DecisionTree train_model() const;
  /// Fragments of the tutorial that mention the API and that the model
  /// classifies Relevant, by descending confidence then document order.
  /// Throws InputError for an unknown API or tutorial.
  std::vector<Recommendation> recommend(const DecisionTree& model, std::string_view api_fqn,
                                        std::string_view tutorial_id) const;

 private:
  Workspace() = default;

  RunConfig config_;
  Dataset dataset_;
  KnownApis known_;
  std::optional<QaIndex> qa_;
  KnowledgeBase knowledge_;
  std::optional<EmbeddingModel> embeddings_;
  bool embeddings_cached_ = false;
  PipelineResources resources_;
};

}  // namespace apifrag
