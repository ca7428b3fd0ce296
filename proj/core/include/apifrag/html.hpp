#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace apifrag::html {

enum class TokenKind { Text, StartTag, EndTag };

/// One lexical HTML token. Comments, doctypes and processing instructions
/// are dropped; the content of script/style elements is dropped as well.
struct Token {
  TokenKind kind = TokenKind::Text;
  /// Lowercase tag name; empty for text.
  std::string name;
  /// Entity-decoded text for Text tokens.
  std::string text;
  std::vector<std::pair<std::string, std::string>> attributes;
  bool self_closing = false;
  /// Byte range of the token in the source.
  std::size_t begin = 0;
  std::size_t end = 0;

  std::optional<std::string_view> attribute(std::string_view key) const;
};

/// Tolerant tokenizer: never throws, unterminated tags become text.
std::vector<Token> tokenize(std::string_view source);

/// Decodes named (amp, lt, gt, quot, apos, nbsp) and numeric entities;
/// unknown entities are kept verbatim.
std::string decode_entities(std::string_view text);

/// Heading depth of h1..h6, or 0.
int heading_level(std::string_view tag_name);

}  // namespace apifrag::html
