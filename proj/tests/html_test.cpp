#include <gtest/gtest.h>

#include "apifrag/html.hpp"

namespace apifrag::html {
namespace {

TEST(HtmlTokenize, TagsTextAndAttributes) {
  const auto tokens = tokenize(R"(<p class="x" id='y'>Hi <b>there</b></p>)");
  ASSERT_EQ(tokens.size(), 6u);
  EXPECT_EQ(tokens[0].kind, TokenKind::StartTag);
  EXPECT_EQ(tokens[0].name, "p");
  EXPECT_EQ(tokens[0].attribute("class"), "x");
  EXPECT_EQ(tokens[0].attribute("id"), "y");
  EXPECT_FALSE(tokens[0].attribute("href").has_value());
  EXPECT_EQ(tokens[1].kind, TokenKind::Text);
  EXPECT_EQ(tokens[1].text, "Hi ");
  EXPECT_EQ(tokens[5].kind, TokenKind::EndTag);
  EXPECT_EQ(tokens[5].name, "p");
}

TEST(HtmlTokenize, UppercaseTagNamesAreLowered) {
  const auto tokens = tokenize("<H2>T</H2>");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[0].name, "h2");
}

TEST(HtmlTokenize, DropsCommentsDoctypeScriptAndStyle) {
  const auto tokens = tokenize("<!DOCTYPE html><!-- note --><script>if (a < b) x();</script><style>p{}</style>ok");
  std::string text;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::Text) text += t.text;
  }
  EXPECT_EQ(text, "ok");
}

TEST(HtmlTokenize, SelfClosingAndByteRanges) {
  const std::string src = "a<br/>b";
  const auto tokens = tokenize(src);
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_TRUE(tokens[1].self_closing);
  EXPECT_EQ(src.substr(tokens[1].begin, tokens[1].end - tokens[1].begin), "<br/>");
}

TEST(HtmlTokenize, UnterminatedTagBecomesText) {
  const auto tokens = tokenize("x < y and <p");
  std::string text;
  for (const auto& t : tokens) {
    EXPECT_EQ(t.kind, TokenKind::Text);
    text += t.text;
  }
  EXPECT_EQ(text, "x < y and <p");
}

TEST(DecodeEntities, NamedAndNumeric) {
  EXPECT_EQ(decode_entities("a &amp; b &lt;c&gt; &quot;d&quot; &#65;&#x42; &unknown;"),
            "a & b <c> \"d\" AB &unknown;");
  EXPECT_EQ(decode_entities("x&nbsp;y"), "x y");
}

TEST(HeadingLevel, Values) {
  EXPECT_EQ(heading_level("h1"), 1);
  EXPECT_EQ(heading_level("h4"), 4);
  EXPECT_EQ(heading_level("h6"), 6);
  EXPECT_EQ(heading_level("hr"), 0);
  EXPECT_EQ(heading_level("p"), 0);
}

}  // namespace
}  // namespace apifrag::html
