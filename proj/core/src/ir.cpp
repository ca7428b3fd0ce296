#include "apifrag/ir.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "apifrag/error.hpp"
#include "apifrag/features.hpp"

namespace apifrag {

IrModel threshold_from_rankings(std::span<const ApiRanking> rankings) {
  std::vector<const ApiRanking*> ordered;
  for (const auto& r : rankings) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const ApiRanking* a, const ApiRanking* b) { return a->fqn < b->fqn; });

  IrModel model;
  double sum = 0.0;
  for (const ApiRanking* r : ordered) {
    if (r->relevant_count == 0) continue;
    if (r->relevant_count > r->similarities.size()) {
      throw InputError("API " + r->fqn + " has more relevant labels than candidate fragments");
    }
    std::vector<double> sims = r->similarities;
    std::sort(sims.begin(), sims.end(), std::greater<>());
    const double lowest_of_top = sims[r->relevant_count - 1];
    model.per_api.emplace_back(r->fqn, lowest_of_top);
    sum += lowest_of_top;
  }
  if (model.per_api.empty()) throw InputError("no API has a relevant fragment; the IR threshold is undefined");
  model.threshold = sum / static_cast<double>(model.per_api.size());
  return model;
}

double ir_similarity(const ApiName& api, const Fragment& fragment, const SpecMap& spec, const CorpusStats& stats) {
  const auto it = spec.find(api.fqn);
  if (it == spec.end() || it->second.description.empty()) {
    throw InputError("API " + api.fqn + " has no specification description");
  }
  return cosine_tfidf_similarity(it->second.description, fragment_text(fragment), stats);
}

IrModel ir_threshold(const Dataset& dataset, const std::vector<std::size_t>& pair_indices, const SpecMap& spec,
                     const CorpusStats& stats) {
  std::map<std::string, ApiRanking> rankings;
  for (const std::size_t i : pair_indices) {
    const ApiFragmentPair& pair = dataset.pairs.at(i);
    if (pair.label == Label::Unknown) continue;
    ApiRanking& r = rankings[pair.api.fqn];
    r.fqn = pair.api.fqn;
    r.similarities.push_back(ir_similarity(pair.api, dataset.fragment_of(pair), spec, stats));
    if (pair.label == Label::Relevant) ++r.relevant_count;
  }
  std::vector<ApiRanking> flat;
  for (auto& [fqn, r] : rankings) flat.push_back(std::move(r));
  return threshold_from_rankings(flat);
}

Label ir_classify(const IrModel& model, double similarity) {
  return similarity > model.threshold ? Label::Relevant : Label::Irrelevant;
}

Label ir_classify(const IrModel& model, const ApiName& api, const Fragment& fragment, const SpecMap& spec,
                  const CorpusStats& stats) {
  return ir_classify(model, ir_similarity(api, fragment, spec, stats));
}

}  // namespace apifrag
