#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/knowledge.hpp"
#include "apifrag/similarity.hpp"

namespace apifrag {

/// Information-retrieval baseline: a fragment explains an API when the tf-idf
/// cosine between the API's specification description and the fragment
/// exceeds a threshold.
struct IrModel {
  double threshold = 0.0;
  /// Per-API lowest similarity among its top-N fragments, for APIs with N >= 1.
  std::vector<std::pair<std::string, double>> per_api;
};

/// One API's candidate fragments scored against its description.
struct ApiRanking {
  std::string fqn;
  std::vector<double> similarities;
  /// N: how many of the candidates are labeled Relevant.
  std::size_t relevant_count = 0;
};

/// Mean over APIs with N >= 1 of the N-th highest similarity. Throws
/// InputError when no API has a relevant fragment.
IrModel threshold_from_rankings(std::span<const ApiRanking> rankings);

/// tf-idf cosine between the API's description and the fragment's
/// paragraphs. Throws InputError if the API has no description.
double ir_similarity(const ApiName& api, const Fragment& fragment, const SpecMap& spec, const CorpusStats& stats);

/// Builds per-API rankings from the labeled pairs in `pair_indices`. Uses the
/// gold labels to pick N, exactly as the baseline protocol prescribes.
IrModel ir_threshold(const Dataset& dataset, const std::vector<std::size_t>& pair_indices, const SpecMap& spec,
                     const CorpusStats& stats);

/// Relevant iff similarity > threshold (strictly).
Label ir_classify(const IrModel& model, const ApiName& api, const Fragment& fragment, const SpecMap& spec,
                  const CorpusStats& stats);
Label ir_classify(const IrModel& model, double similarity);

}  // namespace apifrag
