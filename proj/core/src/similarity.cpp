#include "apifrag/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "apifrag/embedding.hpp"
#include "apifrag/error.hpp"

namespace apifrag {

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::Word2Vec:
      return "word2vec";
    case SimilarityKind::BiGram:
      return "bigram";
    case SimilarityKind::Levenshtein:
      return "levenshtein";
    case SimilarityKind::Jaccard:
      return "jaccard";
    case SimilarityKind::Cosine:
      return "cosine";
  }
  return "word2vec";
}

std::optional<SimilarityKind> parse_similarity_kind(std::string_view name) {
  const std::string lowered = to_lower(name);
  for (auto kind : kAllSimilarityKinds) {
    if (lowered == to_string(kind)) return kind;
  }
  if (lowered == "bi-gram") return SimilarityKind::BiGram;
  return std::nullopt;
}

double TermVector::norm() const {
  double sum = 0.0;
  for (const auto& [term, w] : weights) sum += w * w;
  return std::sqrt(sum);
}

bool TermVector::is_zero() const {
  return std::all_of(weights.begin(), weights.end(), [](const auto& kv) { return kv.second == 0.0; });
}

CorpusStats::CorpusStats(NormalizationConfig normalization, IdfScheme scheme)
    : normalization_(std::move(normalization)), scheme_(scheme) {}

void CorpusStats::add_document(const TextBlock& document) {
  ++document_count_;
  const auto terms = normalize_terms(document.tokens, normalization_);
  const std::set<std::string, std::less<>> unique(terms.begin(), terms.end());
  for (const auto& term : unique) ++document_frequency_[term];
}

CorpusStats CorpusStats::build(std::span<const TextBlock> documents, NormalizationConfig normalization,
                               IdfScheme scheme) {
  CorpusStats stats(std::move(normalization), scheme);
  for (const auto& d : documents) stats.add_document(d);
  return stats;
}

std::size_t CorpusStats::document_frequency(std::string_view term) const {
  const auto it = document_frequency_.find(term);
  return it == document_frequency_.end() ? 0 : it->second;
}

double CorpusStats::idf(std::string_view term) const {
  const double n = static_cast<double>(std::max<std::size_t>(document_count_, 1));
  const double df = std::clamp(static_cast<double>(document_frequency(term)), 1.0, n);
  const double idf = std::log(n / df);
  return scheme_ == IdfScheme::Smoothed ? 1.0 + idf : idf;
}

TermVector CorpusStats::vectorize(const TextBlock& text) const {
  TermVector v;
  for (const auto& term : normalize_terms(text.tokens, normalization_)) v.weights[term] += 1.0;
  for (auto& [term, w] : v.weights) w *= idf(term);
  return v;
}

std::set<std::string> character_bigrams(std::string_view text) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == ' ' || text[i + 1] == ' ') continue;
    out.emplace(text.substr(i, 2));
  }
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> curr(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, substitute});
    }
    std::swap(prev, curr);
  }
  return prev[b.size()];
}

double cosine(const TermVector& a, const TermVector& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  const auto& small = a.weights.size() <= b.weights.size() ? a.weights : b.weights;
  const auto& large = a.weights.size() <= b.weights.size() ? b.weights : a.weights;
  double dot = 0.0;
  for (const auto& [term, w] : small) {
    if (const auto it = large.find(term); it != large.end()) dot += w * it->second;
  }
  return std::clamp(dot / (na * nb), 0.0, 1.0);
}

double bigram_similarity(const TextBlock& t1, const TextBlock& t2) {
  const std::string s1 = t1.joined();
  const std::string s2 = t2.joined();
  const auto b1 = character_bigrams(s1);
  const auto b2 = character_bigrams(s2);
  if (b1.empty() && b2.empty()) return s1 == s2 ? 1.0 : 0.0;
  if (b1.empty() || b2.empty()) return 0.0;
  std::size_t shared = 0;
  for (const auto& g : b1) shared += b2.count(g);
  return 2.0 * static_cast<double>(shared) / static_cast<double>(b1.size() + b2.size());
}

double levenshtein_similarity(const TextBlock& t1, const TextBlock& t2) {
  const std::string s1 = t1.joined();
  const std::string s2 = t2.joined();
  const std::size_t longest = std::max(s1.size(), s2.size());
  if (longest == 0) return 1.0;
  return 1.0 - static_cast<double>(edit_distance(s1, s2)) / static_cast<double>(longest);
}

double jaccard_similarity(const TextBlock& t1, const TextBlock& t2) {
  const std::set<std::string_view> s1(t1.tokens.begin(), t1.tokens.end());
  const std::set<std::string_view> s2(t2.tokens.begin(), t2.tokens.end());
  if (s1.empty() && s2.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& t : s1) shared += s2.count(t);
  const std::size_t united = s1.size() + s2.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(united);
}

double cosine_tfidf_similarity(const TextBlock& t1, const TextBlock& t2, const CorpusStats& corpus_stats) {
  return cosine(corpus_stats.vectorize(t1), corpus_stats.vectorize(t2));
}

double text_similarity(SimilarityKind kind, const TextBlock& t1, const TextBlock& t2,
                       const SimilarityContext& context) {
  switch (kind) {
    case SimilarityKind::Word2Vec:
      if (context.embeddings == nullptr) throw Error("word2vec similarity needs an embedding model");
      return word2vec_similarity(t1, t2, *context.embeddings);
    case SimilarityKind::BiGram:
      return bigram_similarity(t1, t2);
    case SimilarityKind::Levenshtein:
      return levenshtein_similarity(t1, t2);
    case SimilarityKind::Jaccard:
      return jaccard_similarity(t1, t2);
    case SimilarityKind::Cosine:
      if (context.corpus == nullptr) throw Error("cosine similarity needs corpus statistics");
      return cosine_tfidf_similarity(t1, t2, *context.corpus);
  }
  throw Error("unknown similarity kind");
}

}  // namespace apifrag
