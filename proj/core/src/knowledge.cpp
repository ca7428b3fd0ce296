#include "apifrag/knowledge.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "apifrag/error.hpp"
#include "apifrag/html.hpp"
#include "apifrag/util.hpp"

namespace apifrag {
namespace {

using nlohmann::json;

std::string strip_markup(std::string_view body) {
  if (body.find('<') == std::string_view::npos) return html::decode_entities(body);
  std::string out;
  for (const auto& token : html::tokenize(body)) {
    if (token.kind == html::TokenKind::Text) {
      out += token.text;
    } else {
      out.push_back(' ');
    }
  }
  return out;
}

std::string field_string(const json& record, const char* field, const std::string& where) {
  const auto it = record.find(field);
  if (it == record.end() || it->is_null()) throw InputError(where + ": missing field '" + field + "'");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<std::int64_t>());
  throw InputError(where + ": field '" + std::string(field) + "' must be a string");
}

std::int64_t field_int(const json& record, const char* field, const std::string& where) {
  const auto it = record.find(field);
  if (it == record.end() || it->is_null()) throw InputError(where + ": missing field '" + field + "'");
  if (!it->is_number_integer()) throw InputError(where + ": field '" + std::string(field) + "' must be an integer");
  return it->get<std::int64_t>();
}

TextBlock document_text(const QaDocument& doc) {
  return tokenize(doc.question_title + "\n" + doc.question_body.raw + "\n" + doc.answer_body.raw);
}

}  // namespace

QaIndex::QaIndex(std::vector<QaDocument> documents, NormalizationConfig normalization)
    : documents_(std::move(documents)), stats_(std::move(normalization), IdfScheme::Smoothed) {
  std::vector<TextBlock> texts;
  texts.reserve(documents_.size());
  for (const auto& doc : documents_) {
    texts.push_back(document_text(doc));
    stats_.add_document(texts.back());
  }
  for (std::size_t i = 0; i < documents_.size(); ++i) {
    std::map<std::string, std::uint32_t, std::less<>> tf;
    for (auto& term : normalize_terms(texts[i].tokens, stats_.normalization())) ++tf[term];
    for (const auto& [term, count] : tf) postings_[term].push_back(Posting{i, count});
    vectors_.push_back(stats_.vectorize(texts[i]));
  }
}

const std::vector<QaIndex::Posting>& QaIndex::postings(std::string_view term) const {
  static const std::vector<Posting> kNone;
  const auto it = postings_.find(term);
  return it == postings_.end() ? kNone : it->second;
}

TextBlock QaIndex::query_text(const ApiName& api) const {
  TokenList tokens = api.component_words;
  tokens.push_back(to_lower(api.simple_name));
  tokens.push_back(to_lower(api.fqn));
  return make_text(std::move(tokens));
}

std::vector<std::string> QaIndex::query_terms(const ApiName& api) const {
  return normalize_terms(query_text(api).tokens, stats_.normalization());
}

std::vector<QaDocument> parse_qa_corpus(std::string_view content, std::string_view source_name) {
  std::vector<QaDocument> docs;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t line_no = 0;
  std::set<std::string, std::less<>> ids;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(where + ": malformed JSON record (" + e.what() + ")");
    }
    if (!record.is_object()) throw InputError(where + ": record must be a JSON object");
    QaDocument doc;
    doc.id = field_string(record, "id", where);
    doc.question_title = strip_markup(field_string(record, "question_title", where));
    doc.question_body = tokenize(strip_markup(field_string(record, "question_body", where)));
    doc.answer_body = tokenize(strip_markup(field_string(record, "answer_body", where)));
    doc.question_score = field_int(record, "question_score", where);
    doc.answer_score = field_int(record, "answer_score", where);
    if (!ids.insert(doc.id).second) throw InputError(where + ": duplicate id '" + doc.id + "'");
    docs.push_back(std::move(doc));
  }
  if (docs.empty()) throw InputError(std::string(source_name) + ": Q&A corpus is empty");
  return docs;
}

QaIndex index_qa_corpus(const std::filesystem::path& corpus_file) {
  return QaIndex(parse_qa_corpus(read_file(corpus_file), corpus_file.string()));
}

std::vector<RankedQa> rank_qa(const ApiName& api, const QaIndex& index, std::size_t top_k) {
  std::vector<RankedQa> ranked;
  if (index.empty()) return ranked;

  const TermVector query = index.stats().vectorize(index.query_text(api));
  std::set<std::size_t> touched;
  for (const auto& [term, weight] : query.weights) {
    for (const auto& posting : index.postings(term)) touched.insert(posting.doc);
  }

  struct Candidate {
    std::size_t doc;
    double text;
    double quality;
  };
  std::vector<Candidate> candidates;
  for (const std::size_t doc : touched) {
    const double sim = cosine(query, index.document_vector(doc));
    if (sim > 0.0) {
      candidates.push_back({doc, sim, static_cast<double>(index.documents()[doc].quality())});
    }
  }

  const auto rescale = [](double value, double lo, double hi) { return hi > lo ? (value - lo) / (hi - lo) : 1.0; };
  double text_lo = 0.0, text_hi = 0.0, q_lo = 0.0, q_hi = 0.0;
  if (!candidates.empty()) {
    text_lo = text_hi = candidates.front().text;
    q_lo = q_hi = candidates.front().quality;
    for (const auto& c : candidates) {
      text_lo = std::min(text_lo, c.text);
      text_hi = std::max(text_hi, c.text);
      q_lo = std::min(q_lo, c.quality);
      q_hi = std::max(q_hi, c.quality);
    }
  }

  std::vector<bool> is_candidate(index.size(), false);
  for (const auto& c : candidates) {
    RankedQa r;
    r.document = &index.documents()[c.doc];
    r.text_similarity = rescale(c.text, text_lo, text_hi);
    r.quality = rescale(c.quality, q_lo, q_hi);
    r.score = (r.text_similarity + r.quality) / 2.0;
    ranked.push_back(r);
    is_candidate[c.doc] = true;
  }
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (!is_candidate[i]) ranked.push_back(RankedQa{&index.documents()[i], 0.0, 0.0, 0.0});
  }

  std::sort(ranked.begin(), ranked.end(), [](const RankedQa& a, const RankedQa& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.document->id < b.document->id;
  });
  if (top_k > 0 && ranked.size() > top_k) ranked.resize(top_k);
  return ranked;
}

std::optional<CrowdExtension> crowd_extension(const ApiName& api, const QaIndex& index) {
  const auto ranked = rank_qa(api, index, 1);
  if (ranked.empty() || ranked.front().score <= 0.0) return std::nullopt;
  const QaDocument& doc = *ranked.front().document;
  return CrowdExtension{api, doc.id, document_text(doc)};
}

SpecMap parse_spec(std::string_view json_text, std::string_view source_name) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string(source_name) + ": malformed JSON (" + e.what() + ")");
  }
  if (!root.is_array()) throw InputError(std::string(source_name) + ": expected a JSON array of API entries");

  SpecMap spec;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const auto& entry = root[i];
    const std::string where = std::string(source_name) + "[" + std::to_string(i) + "]";
    if (!entry.is_object()) throw InputError(where + ": entry must be an object");
    SpecEntry e;
    e.api = ApiName::parse(field_string(entry, "fqn", where));
    if (const auto it = entry.find("description"); it != entry.end() && it->is_string()) {
      e.description = tokenize(strip_markup(it->get<std::string>()));
    }
    if (const auto it = entry.find("methods"); it != entry.end() && !it->is_null()) {
      if (!it->is_array()) throw InputError(where + ": 'methods' must be an array");
      std::set<std::string, std::less<>> seen;
      for (const auto& m : *it) {
        if (!m.is_string()) throw InputError(where + ": method names must be strings");
        std::string name = trim(m.get<std::string>());
        if (!name.empty() && seen.insert(name).second) e.methods.push_back(std::move(name));
      }
    }
    const std::string fqn = e.api.fqn;
    if (!spec.emplace(fqn, std::move(e)).second) throw InputError(where + ": duplicate fqn '" + fqn + "'");
  }
  return spec;
}

SpecMap load_spec(const std::filesystem::path& spec_file) {
  return parse_spec(read_file(spec_file), spec_file.string());
}

const SpecEntry* KnowledgeBase::spec_for(std::string_view fqn) const {
  const auto it = spec.find(fqn);
  return it == spec.end() ? nullptr : &it->second;
}

const CrowdExtension* KnowledgeBase::crowd_for(std::string_view fqn) const {
  const auto it = crowd.find(fqn);
  return it == crowd.end() ? nullptr : &it->second;
}

KnowledgeBase build_knowledge(const QaIndex* index, SpecMap spec, const std::vector<ApiName>& apis) {
  KnowledgeBase kb;
  kb.spec = std::move(spec);
  if (index != nullptr) {
    for (const auto& api : apis) {
      if (kb.crowd.contains(api.fqn)) continue;
      if (auto ext = crowd_extension(api, *index)) kb.crowd.emplace(api.fqn, std::move(*ext));
    }
  }
  return kb;
}

}  // namespace apifrag
