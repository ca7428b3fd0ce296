#include "apifrag/pipeline.hpp"

#include <set>

namespace apifrag {

FeatureResources PipelineResources::feature_resources() const {
  FeatureResources r;
  r.knowledge = knowledge;
  r.similarity.embeddings = embeddings;
  r.similarity.corpus = &fragment_stats;
  r.normalization = normalization;
  return r;
}

CorpusStats fragment_corpus_stats(const Dataset& dataset, const NormalizationConfig& normalization) {
  CorpusStats stats(normalization);
  for (const auto& t : dataset.tutorials) {
    for (const auto& f : t.fragments) stats.add_document(fragment_text(f));
  }
  return stats;
}

std::vector<TokenList> embedding_corpus(const Dataset& dataset, const QaIndex* qa_index, const SpecMap& spec) {
  std::vector<TokenList> corpus;
  const auto add_block = [&](const TextBlock& block) {
    for (const auto& s : block.sentences) corpus.push_back(s);
  };
  for (const auto& t : dataset.tutorials) {
    for (const auto& f : t.fragments) {
      add_block(tokenize(f.title));
      for (const auto& p : f.paragraphs) add_block(tokenize(p));
      for (const auto& c : f.code_blocks) {
        const auto block = tokenize(c);
        if (!block.tokens.empty()) corpus.push_back(block.tokens);
      }
    }
  }
  if (qa_index != nullptr) {
    for (const auto& doc : qa_index->documents()) {
      add_block(tokenize(doc.question_title));
      add_block(doc.question_body);
      add_block(doc.answer_body);
    }
  }
  for (const auto& [fqn, entry] : spec) {
    add_block(entry.description);
    TokenList names = entry.api.component_words;
    names.push_back(to_lower(entry.api.simple_name));
    for (const auto& m : entry.methods) names.push_back(to_lower(m));
    corpus.push_back(std::move(names));
  }
  return corpus;
}

std::vector<ApiName> dataset_apis(const Dataset& dataset) {
  std::vector<ApiName> apis;
  std::set<std::string, std::less<>> seen;
  for (const auto& p : dataset.pairs) {
    if (seen.insert(p.api.fqn).second) apis.push_back(p.api);
  }
  return apis;
}

}  // namespace apifrag
