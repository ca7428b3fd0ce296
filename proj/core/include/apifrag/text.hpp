#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace apifrag {

struct Fragment;
struct ApiName;

using TokenList = std::vector<std::string>;

/// Tokenized text. `tokens` is always the concatenation of `sentences`.
struct TextBlock {
  std::string raw;
  TokenList tokens;
  std::vector<TokenList> sentences;

  bool empty() const noexcept { return tokens.empty(); }
  /// Tokens joined with single spaces.
  std::string joined() const;
};

struct NormalizationConfig {
  std::set<std::string, std::less<>> stopwords;
  bool stemming_enabled = true;

  /// The compiled-in English stopword list with stemming on.
  static NormalizationConfig defaults();
  bool is_stopword(std::string_view word) const;
};

/// Splits text into sentences and lowercase tokens.
///
/// Tokens are maximal runs of letters, digits and underscores; a dot between
/// two such characters is kept so dotted identifiers (`java.util.Iterator`)
/// survive as one token. A sentence ends at `.`, `!` or `?` followed by
/// whitespace or end of input, unless the token before a `.` is a known
/// abbreviation ("e.g", "i.e", "etc", ...).
TextBlock tokenize(std::string_view text);

/// Same as tokenize() but keeps the original case of every token.
TextBlock tokenize_preserving_case(std::string_view text);

/// Builds a TextBlock from already tokenized words as one sentence.
TextBlock make_text(TokenList tokens);

/// Concatenates blocks, keeping each block's sentences.
TextBlock concat(const std::vector<const TextBlock*>& blocks);

/// CamelCase splitting: "HTTPServer" -> {"http", "server"}, "Base64Coder" ->
/// {"base", "64", "coder"}. Underscores and dots separate words.
std::vector<std::string> split_camel_case(std::string_view identifier);

std::string to_lower(std::string_view s);

/// Light suffix stripping (-ing, -ed, -es, -s) used for tf-idf terms only.
std::string stem(std::string_view word);

/// Tokens with stopwords removed and, if enabled, stemmed.
std::vector<std::string> normalize_terms(const TokenList& tokens, const NormalizationConfig& config);

/// True if the sentence contains one of the cue phrases that introduce
/// examples: "for example", "such as", "for instance", "e.g.",
/// "like the following".
bool is_condition_sentence(const TokenList& sentence);

/// True if `token` (lowercase) names the API: its simple name, its fqn, or a
/// member access on the fqn.
bool token_mentions(std::string_view token, const ApiName& api);

/// Subject heuristic: the API is mentioned before the first verb of the
/// sentence, with verbs taken from the compiled-in lexicon.
bool subject_mentions(const TokenList& sentence, const ApiName& api);

const std::set<std::string, std::less<>>& verb_lexicon();
const std::set<std::string, std::less<>>& default_stopwords();

/// Reads a one-word-per-line list; blank lines and `#` comments are skipped.
std::set<std::string, std::less<>> load_word_list(const std::string& path);

inline constexpr std::size_t kClueWordLimit = 10;

/// The most frequent non-stopword tokens, at most kClueWordLimit, ordered by
/// descending frequency then alphabetically.
std::vector<std::string> clue_words(const TokenList& tokens, const NormalizationConfig& config);
std::vector<std::string> clue_words(const Fragment& fragment, const NormalizationConfig& config);

}  // namespace apifrag
