#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/similarity.hpp"
#include "apifrag/text.hpp"

namespace apifrag {

/// A question paired with its best answer. Bodies may be HTML; markup is
/// stripped before tokenization.
struct QaDocument {
  std::string id;
  std::string question_title;
  TextBlock question_body;
  TextBlock answer_body;
  std::int64_t question_score = 0;
  std::int64_t answer_score = 0;

  std::int64_t quality() const noexcept { return question_score + answer_score; }
};

/// Inverted index over the normalized terms of title + question + answer.
class QaIndex {
 public:
  struct Posting {
    std::size_t doc = 0;
    std::uint32_t term_frequency = 0;
    friend bool operator==(const Posting&, const Posting&) = default;
  };

  explicit QaIndex(std::vector<QaDocument> documents,
                   NormalizationConfig normalization = NormalizationConfig::defaults());

  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const std::vector<QaDocument>& documents() const noexcept { return documents_; }
  /// Postings sorted by document position; empty for unseen terms.
  const std::vector<Posting>& postings(std::string_view term) const;
  const CorpusStats& stats() const noexcept { return stats_; }
  const TermVector& document_vector(std::size_t doc) const { return vectors_.at(doc); }
  /// Normalized query terms for an API: component words, simple name, fqn.
  std::vector<std::string> query_terms(const ApiName& api) const;
  TextBlock query_text(const ApiName& api) const;

 private:
  std::vector<QaDocument> documents_;
  CorpusStats stats_;
  std::vector<TermVector> vectors_;
  std::map<std::string, std::vector<Posting>, std::less<>> postings_;
};

/// Parses JSON lines with fields id, question_title, question_body,
/// answer_body, question_score, answer_score. Throws InputError naming the
/// line and field on malformed input, and on an empty corpus.
std::vector<QaDocument> parse_qa_corpus(std::string_view content, std::string_view source_name = "qa corpus");
QaIndex index_qa_corpus(const std::filesystem::path& corpus_file);

struct RankedQa {
  const QaDocument* document = nullptr;
  double score = 0.0;
  /// Rescaled halves of the score.
  double text_similarity = 0.0;
  double quality = 0.0;
};

/// Ranks every document for the API. Candidates are documents with positive
/// tf-idf cosine to the query; over the candidates both the cosine and the
/// quality (question + answer score) are min-max rescaled to [0, 1] (a
/// degenerate range maps to 1) and averaged. Non-candidates score 0. Sorted by
/// descending score, then by document id. `top_k` = 0 keeps all.
std::vector<RankedQa> rank_qa(const ApiName& api, const QaIndex& index, std::size_t top_k = 0);

struct CrowdExtension {
  ApiName api;
  std::string source_doc_id;
  /// Question title, question body and answer body.
  TextBlock text;
};

/// The top-ranked question/answer pair, or nothing if the index is empty or
/// no document scores above 0.
std::optional<CrowdExtension> crowd_extension(const ApiName& api, const QaIndex& index);

struct SpecEntry {
  ApiName api;
  TextBlock description;
  /// Unique method simple names in file order.
  std::vector<std::string> methods;
};

using SpecMap = std::map<std::string, SpecEntry, std::less<>>;

/// JSON array of {"fqn", "description", "methods": [...]}. A missing
/// methods array is an empty list; a repeated fqn is an InputError.
SpecMap parse_spec(std::string_view json_text, std::string_view source_name = "spec");
SpecMap load_spec(const std::filesystem::path& spec_file);

/// Crowd and expert extensions for a set of APIs, computed once.
struct KnowledgeBase {
  SpecMap spec;
  std::map<std::string, CrowdExtension, std::less<>> crowd;

  const SpecEntry* spec_for(std::string_view fqn) const;
  const CrowdExtension* crowd_for(std::string_view fqn) const;
};

KnowledgeBase build_knowledge(const QaIndex* index, SpecMap spec, const std::vector<ApiName>& apis);

}  // namespace apifrag
