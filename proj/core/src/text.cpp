#include "apifrag/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <span>
#include <sstream>

#include "apifrag/corpus.hpp"
#include "apifrag/error.hpp"
#include "apifrag/resources_data.hpp"

namespace apifrag {
namespace {

using WordSet = std::set<std::string, std::less<>>;

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) != 0 || c == '_' || u >= 0x80;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

const WordSet& abbreviations() {
  static const WordSet kAbbreviations = {"e.g", "i.e", "etc", "vs", "cf", "fig", "al",
                                         "approx", "resp", "mr", "mrs", "dr", "no"};
  return kAbbreviations;
}

WordSet parse_word_list(std::string_view content) {
  WordSet words;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    words.insert(to_lower(std::string_view(line).substr(begin, end - begin + 1)));
  }
  return words;
}

TextBlock tokenize_impl(std::string_view text, bool lowercase) {
  TextBlock block;
  block.raw = std::string(text);
  TokenList sentence;
  std::string current;

  const auto flush_token = [&] {
    if (current.empty()) return;
    sentence.push_back(lowercase ? to_lower(current) : current);
    current.clear();
  };
  const auto flush_sentence = [&] {
    if (sentence.empty()) return;
    block.tokens.insert(block.tokens.end(), sentence.begin(), sentence.end());
    block.sentences.push_back(std::move(sentence));
    sentence.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    const bool has_next = i + 1 < text.size();
    if (is_word_char(c)) {
      current.push_back(c);
      continue;
    }
    if (c == '.' && !current.empty() && has_next && is_word_char(text[i + 1])) {
      current.push_back(c);
      continue;
    }
    flush_token();
    if ((c == '.' || c == '!' || c == '?') && (!has_next || is_space(text[i + 1]))) {
      if (c == '.' && !sentence.empty() && abbreviations().contains(to_lower(sentence.back()))) {
        continue;
      }
      flush_sentence();
    }
  }
  flush_token();
  flush_sentence();
  return block;
}

bool contains_phrase(const TokenList& sentence, std::span<const std::string_view> phrase) {
  if (phrase.empty() || sentence.size() < phrase.size()) return false;
  for (std::size_t i = 0; i + phrase.size() <= sentence.size(); ++i) {
    bool match = true;
    for (std::size_t k = 0; k < phrase.size() && match; ++k) match = sentence[i + k] == phrase[k];
    if (match) return true;
  }
  return false;
}

}  // namespace

std::string TextBlock::joined() const {
  std::string out;
  for (const auto& token : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += token;
  }
  return out;
}

NormalizationConfig NormalizationConfig::defaults() {
  NormalizationConfig config;
  config.stopwords = default_stopwords();
  config.stemming_enabled = true;
  return config;
}

bool NormalizationConfig::is_stopword(std::string_view word) const { return stopwords.contains(word); }

TextBlock tokenize(std::string_view text) { return tokenize_impl(text, true); }

TextBlock tokenize_preserving_case(std::string_view text) { return tokenize_impl(text, false); }

TextBlock make_text(TokenList tokens) {
  TextBlock block;
  for (const auto& t : tokens) {
    if (!block.raw.empty()) block.raw.push_back(' ');
    block.raw += t;
  }
  block.tokens = tokens;
  if (!tokens.empty()) block.sentences.push_back(std::move(tokens));
  return block;
}

TextBlock concat(const std::vector<const TextBlock*>& blocks) {
  TextBlock out;
  for (const TextBlock* b : blocks) {
    if (b == nullptr) continue;
    if (!out.raw.empty() && !b->raw.empty()) out.raw.push_back('\n');
    out.raw += b->raw;
    out.tokens.insert(out.tokens.end(), b->tokens.begin(), b->tokens.end());
    out.sentences.insert(out.sentences.end(), b->sentences.begin(), b->sentences.end());
  }
  return out;
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_camel_case(std::string_view identifier) {
  std::vector<std::string> words;
  std::string current;
  const auto is_upper = [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; };
  const auto is_lower = [](char c) { return std::islower(static_cast<unsigned char>(c)) != 0; };
  const auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };
  const auto flush = [&] {
    if (!current.empty()) words.push_back(to_lower(current));
    current.clear();
  };

  for (std::size_t i = 0; i < identifier.size(); ++i) {
    const char c = identifier[i];
    if (std::isalnum(static_cast<unsigned char>(c)) == 0) {
      flush();
      continue;
    }
    if (!current.empty()) {
      const char prev = current.back();
      const bool next_lower = i + 1 < identifier.size() && is_lower(identifier[i + 1]);
      const bool boundary = (is_lower(prev) && is_upper(c)) ||
                            (is_digit(prev) != is_digit(c)) ||
                            (is_upper(prev) && is_upper(c) && next_lower);
      if (boundary) flush();
    }
    current.push_back(c);
  }
  flush();
  return words;
}

std::string stem(std::string_view word) {
  std::string w(word);
  const auto ends_with = [&](std::string_view suffix) {
    return w.size() > suffix.size() && std::string_view(w).substr(w.size() - suffix.size()) == suffix;
  };
  if (w.size() > 5 && ends_with("ing")) {
    w.resize(w.size() - 3);
  } else if (w.size() > 4 && ends_with("ed")) {
    w.resize(w.size() - 2);
  } else if (w.size() > 4 && ends_with("ies")) {
    w.resize(w.size() - 3);
    w.push_back('y');
  } else if (w.size() > 4 && (ends_with("sses") || ends_with("xes") || ends_with("ches") || ends_with("shes"))) {
    w.resize(w.size() - 2);
  } else if (w.size() > 3 && ends_with("s") && !ends_with("ss") && !ends_with("us") && !ends_with("is")) {
    w.resize(w.size() - 1);
  }
  return w;
}

std::vector<std::string> normalize_terms(const TokenList& tokens, const NormalizationConfig& config) {
  std::vector<std::string> terms;
  terms.reserve(tokens.size());
  for (const auto& token : tokens) {
    if (config.is_stopword(token)) continue;
    terms.push_back(config.stemming_enabled ? stem(token) : token);
  }
  return terms;
}

bool is_condition_sentence(const TokenList& sentence) {
  static constexpr std::array<std::string_view, 2> kForExample{"for", "example"};
  static constexpr std::array<std::string_view, 2> kSuchAs{"such", "as"};
  static constexpr std::array<std::string_view, 2> kForInstance{"for", "instance"};
  static constexpr std::array<std::string_view, 1> kEg{"e.g"};
  static constexpr std::array<std::string_view, 3> kLikeTheFollowing{"like", "the", "following"};
  return contains_phrase(sentence, kForExample) || contains_phrase(sentence, kSuchAs) ||
         contains_phrase(sentence, kForInstance) || contains_phrase(sentence, kEg) ||
         contains_phrase(sentence, kLikeTheFollowing);
}

bool token_mentions(std::string_view token, const ApiName& api) {
  const std::string simple = to_lower(api.simple_name);
  if (token == simple) return true;
  const std::string fqn = to_lower(api.fqn);
  if (token == fqn) return true;
  return token.size() > fqn.size() && token.starts_with(fqn) && token[fqn.size()] == '.';
}

bool subject_mentions(const TokenList& sentence, const ApiName& api) {
  const auto& verbs = verb_lexicon();
  for (const auto& token : sentence) {
    if (token_mentions(token, api)) return true;
    if (verbs.contains(token)) return false;
  }
  return false;
}

const std::set<std::string, std::less<>>& verb_lexicon() {
  static const WordSet kVerbs = parse_word_list(resources::kVerbs);
  return kVerbs;
}

const std::set<std::string, std::less<>>& default_stopwords() {
  static const WordSet kStopwords = parse_word_list(resources::kStopwords);
  return kStopwords;
}

std::set<std::string, std::less<>> load_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open word list: " + path);
  std::ostringstream content;
  content << in.rdbuf();
  return parse_word_list(content.str());
}

std::vector<std::string> clue_words(const TokenList& tokens, const NormalizationConfig& config) {
  std::map<std::string, std::size_t, std::less<>> counts;
  for (const auto& token : tokens) {
    if (!config.is_stopword(token)) ++counts[token];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ranked.size() && i < kClueWordLimit; ++i) out.push_back(ranked[i].first);
  return out;
}

std::vector<std::string> clue_words(const Fragment& fragment, const NormalizationConfig& config) {
  TokenList tokens;
  for (const auto& paragraph : fragment.paragraphs) {
    auto block = tokenize(paragraph);
    tokens.insert(tokens.end(), block.tokens.begin(), block.tokens.end());
  }
  return clue_words(tokens, config);
}

}  // namespace apifrag
