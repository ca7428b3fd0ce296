#include "apifrag/html.hpp"

#include <cctype>
#include <cstdint>

#include "apifrag/text.hpp"

namespace apifrag::html {
namespace {

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '_' || c == ':';
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Parses attributes in [pos, end) of a start tag body.
std::vector<std::pair<std::string, std::string>> parse_attributes(std::string_view body) {
  std::vector<std::pair<std::string, std::string>> attrs;
  std::size_t i = 0;
  while (i < body.size()) {
    while (i < body.size() && (is_space(body[i]) || body[i] == '/')) ++i;
    const std::size_t name_begin = i;
    while (i < body.size() && !is_space(body[i]) && body[i] != '=' && body[i] != '/') ++i;
    if (i == name_begin) {
      ++i;
      continue;
    }
    std::string key = to_lower(body.substr(name_begin, i - name_begin));
    while (i < body.size() && is_space(body[i])) ++i;
    std::string value;
    if (i < body.size() && body[i] == '=') {
      ++i;
      while (i < body.size() && is_space(body[i])) ++i;
      if (i < body.size() && (body[i] == '"' || body[i] == '\'')) {
        const char quote = body[i++];
        const std::size_t value_begin = i;
        while (i < body.size() && body[i] != quote) ++i;
        value = decode_entities(body.substr(value_begin, i - value_begin));
        if (i < body.size()) ++i;
      } else {
        const std::size_t value_begin = i;
        while (i < body.size() && !is_space(body[i])) ++i;
        value = decode_entities(body.substr(value_begin, i - value_begin));
      }
    }
    attrs.emplace_back(std::move(key), std::move(value));
  }
  return attrs;
}

}  // namespace

std::optional<std::string_view> Token::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return std::string_view(v);
  }
  return std::nullopt;
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    const auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(text[i++]);
      continue;
    }
    const std::string_view entity = text.substr(i + 1, semi - i - 1);
    bool decoded = true;
    if (entity == "amp") {
      out.push_back('&');
    } else if (entity == "lt") {
      out.push_back('<');
    } else if (entity == "gt") {
      out.push_back('>');
    } else if (entity == "quot") {
      out.push_back('"');
    } else if (entity == "apos") {
      out.push_back('\'');
    } else if (entity == "nbsp") {
      out.push_back(' ');
    } else if (entity.size() > 1 && entity[0] == '#') {
      std::uint32_t cp = 0;
      const bool hex = entity[1] == 'x' || entity[1] == 'X';
      const std::string_view digits = entity.substr(hex ? 2 : 1);
      if (digits.empty()) decoded = false;
      for (char c : digits) {
        const auto u = static_cast<unsigned char>(c);
        if (hex && std::isxdigit(u) != 0) {
          cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(u) != 0 ? c - '0' : (std::tolower(u) - 'a' + 10));
        } else if (!hex && std::isdigit(u) != 0) {
          cp = cp * 10 + static_cast<std::uint32_t>(c - '0');
        } else {
          decoded = false;
          break;
        }
        if (cp > 0x10FFFF) {
          decoded = false;
          break;
        }
      }
      if (decoded) append_utf8(out, cp == 0xA0 ? ' ' : cp);
    } else {
      decoded = false;
    }
    if (decoded) {
      i = semi + 1;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

int heading_level(std::string_view tag_name) {
  if (tag_name.size() == 2 && tag_name[0] == 'h' && tag_name[1] >= '1' && tag_name[1] <= '6') {
    return tag_name[1] - '0';
  }
  return 0;
}

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t text_begin = 0;
  std::size_t i = 0;

  const auto emit_text = [&](std::size_t end) {
    if (end > text_begin) {
      Token t;
      t.kind = TokenKind::Text;
      t.text = decode_entities(source.substr(text_begin, end - text_begin));
      t.begin = text_begin;
      t.end = end;
      tokens.push_back(std::move(t));
    }
  };

  while (i < source.size()) {
    if (source[i] != '<') {
      ++i;
      continue;
    }
    if (source.compare(i, 4, "<!--") == 0) {
      emit_text(i);
      const auto close = source.find("-->", i + 4);
      i = close == std::string_view::npos ? source.size() : close + 3;
      text_begin = i;
      continue;
    }
    if (i + 1 < source.size() && (source[i + 1] == '!' || source[i + 1] == '?')) {
      emit_text(i);
      const auto close = source.find('>', i);
      i = close == std::string_view::npos ? source.size() : close + 1;
      text_begin = i;
      continue;
    }
    const bool closing = i + 1 < source.size() && source[i + 1] == '/';
    const std::size_t name_begin = i + (closing ? 2 : 1);
    if (name_begin >= source.size() || std::isalpha(static_cast<unsigned char>(source[name_begin])) == 0) {
      ++i;  // a literal '<'
      continue;
    }
    const auto close = source.find('>', name_begin);
    if (close == std::string_view::npos) {
      ++i;
      continue;
    }
    emit_text(i);
    std::size_t name_end = name_begin;
    while (name_end < close && is_name_char(source[name_end])) ++name_end;

    Token tag;
    tag.kind = closing ? TokenKind::EndTag : TokenKind::StartTag;
    tag.name = to_lower(source.substr(name_begin, name_end - name_begin));
    tag.begin = i;
    tag.end = close + 1;
    if (!closing) {
      std::string_view body = source.substr(name_end, close - name_end);
      if (!body.empty() && body.back() == '/') {
        tag.self_closing = true;
        body.remove_suffix(1);
      }
      tag.attributes = parse_attributes(body);
    }
    i = close + 1;
    text_begin = i;

    const bool raw_text = !closing && !tag.self_closing && (tag.name == "script" || tag.name == "style");
    const std::string raw_name = tag.name;
    tokens.push_back(std::move(tag));
    if (raw_text) {
      // Skip to the matching end tag; the content is not document text.
      std::size_t j = i;
      while (true) {
        j = source.find("</", j);
        if (j == std::string_view::npos) {
          i = source.size();
          break;
        }
        if (to_lower(source.substr(j + 2, raw_name.size())) == raw_name) {
          i = j;
          break;
        }
        j += 2;
      }
      text_begin = i;
    }
  }
  emit_text(source.size());
  return tokens;
}

}  // namespace apifrag::html
