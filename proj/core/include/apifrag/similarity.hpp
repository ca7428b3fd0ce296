#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

#include "apifrag/text.hpp"

namespace apifrag {

class EmbeddingModel;

enum class SimilarityKind { Word2Vec, BiGram, Levenshtein, Jaccard, Cosine };

inline constexpr std::array<SimilarityKind, 5> kAllSimilarityKinds = {
    SimilarityKind::Word2Vec, SimilarityKind::BiGram, SimilarityKind::Levenshtein,
    SimilarityKind::Jaccard, SimilarityKind::Cosine};

std::string_view to_string(SimilarityKind kind);
/// Case-insensitive; accepts "word2vec", "bigram", "levenshtein", "jaccard", "cosine".
std::optional<SimilarityKind> parse_similarity_kind(std::string_view name);

/// Sparse tf-idf weights keyed by normalized term.
struct TermVector {
  std::map<std::string, double, std::less<>> weights;

  double norm() const;
  bool is_zero() const;
};

enum class IdfScheme {
  /// ln(N / df): terms present in every document weigh zero.
  Plain,
  /// 1 + ln(N / df), as search engines use so tiny corpora still rank.
  Smoothed,
};

/// Document frequencies for tf-idf with df clamped to [1, N]. Terms are
/// normalized with the stored NormalizationConfig.
class CorpusStats {
 public:
  CorpusStats() : CorpusStats(NormalizationConfig::defaults()) {}
  explicit CorpusStats(NormalizationConfig normalization, IdfScheme scheme = IdfScheme::Plain);

  void add_document(const TextBlock& document);
  static CorpusStats build(std::span<const TextBlock> documents,
                           NormalizationConfig normalization = NormalizationConfig::defaults(),
                           IdfScheme scheme = IdfScheme::Plain);

  std::size_t document_count() const noexcept { return document_count_; }
  std::size_t document_frequency(std::string_view term) const;
  double idf(std::string_view term) const;
  /// Raw term counts times idf.
  TermVector vectorize(const TextBlock& text) const;
  const NormalizationConfig& normalization() const noexcept { return normalization_; }

 private:
  NormalizationConfig normalization_;
  IdfScheme scheme_ = IdfScheme::Plain;
  std::size_t document_count_ = 0;
  std::map<std::string, std::size_t, std::less<>> document_frequency_;
};

/// Distinct character bigrams of `text`, skipping pairs that contain a space.
std::set<std::string> character_bigrams(std::string_view text);

/// Unit-cost insert/delete/substitute distance over bytes.
std::size_t edit_distance(std::string_view a, std::string_view b);

double cosine(const TermVector& a, const TermVector& b);

/// 2|Bi(a) ∩ Bi(b)| / (|Bi(a)| + |Bi(b)|) over the space-joined tokens.
/// With no bigram on either side the texts are compared for equality.
double bigram_similarity(const TextBlock& t1, const TextBlock& t2);
/// 1 - distance / max length over the space-joined tokens; 1 for two empty texts.
double levenshtein_similarity(const TextBlock& t1, const TextBlock& t2);
/// |S1 ∩ S2| / |S1 ∪ S2| over token sets; 1 for two empty texts.
double jaccard_similarity(const TextBlock& t1, const TextBlock& t2);
/// Cosine of tf-idf vectors; 0 if either vector is zero.
double cosine_tfidf_similarity(const TextBlock& t1, const TextBlock& t2, const CorpusStats& corpus_stats);

/// The resources a similarity kind may need. Word2Vec needs `embeddings`,
/// Cosine needs `corpus`.
struct SimilarityContext {
  const EmbeddingModel* embeddings = nullptr;
  const CorpusStats* corpus = nullptr;
};

/// Dispatches on kind. Throws Error if the required resource is missing.
double text_similarity(SimilarityKind kind, const TextBlock& t1, const TextBlock& t2,
                       const SimilarityContext& context);

}  // namespace apifrag
