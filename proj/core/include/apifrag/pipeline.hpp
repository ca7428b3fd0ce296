#pragma once

#include <map>
#include <string>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/embedding.hpp"
#include "apifrag/features.hpp"
#include "apifrag/knowledge.hpp"
#include "apifrag/similarity.hpp"
#include "apifrag/tree.hpp"

namespace apifrag {

/// Everything an experiment reads. Pointers are non-owning and must outlive
/// the experiment; `embeddings` may be null when Word2Vec is not used.
struct PipelineResources {
  const Dataset* dataset = nullptr;
  const KnowledgeBase* knowledge = nullptr;
  const EmbeddingModel* embeddings = nullptr;
  /// Document frequencies over every fragment of the dataset.
  CorpusStats fragment_stats;
  NormalizationConfig normalization = NormalizationConfig::defaults();
  TreeConfig tree;
  /// Configuration and input hashes copied into every report.
  std::map<std::string, std::string> snapshot;

  FeatureResources feature_resources() const;
};

CorpusStats fragment_corpus_stats(const Dataset& dataset, const NormalizationConfig& normalization);

/// Sentences for embedding training: tutorial titles, paragraph sentences and
/// code blocks, Q&A documents, and specification descriptions plus one
/// sentence per API of its name words and method names.
std::vector<TokenList> embedding_corpus(const Dataset& dataset, const QaIndex* qa_index, const SpecMap& spec);

/// Every API that appears in a pair of the dataset, in first-seen order.
std::vector<ApiName> dataset_apis(const Dataset& dataset);

}  // namespace apifrag
