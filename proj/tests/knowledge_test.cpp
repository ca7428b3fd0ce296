#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "apifrag/error.hpp"
#include "apifrag/knowledge.hpp"
#include "apifrag/util.hpp"
#include "fixtures.hpp"

namespace apifrag {
namespace {

std::string record(const std::string& id, const std::string& title, const std::string& q, const std::string& a,
                   int qs, int as) {
  return "{\"id\":\"" + id + "\",\"question_title\":\"" + title + "\",\"question_body\":\"" + q +
         "\",\"answer_body\":\"" + a + "\",\"question_score\":" + std::to_string(qs) +
         ",\"answer_score\":" + std::to_string(as) + "}\n";
}

const std::string kThreeRecords = record("q1", "Iterator skips", "<p>My iterator skips items</p>", "Call hasNext",
                                         3, 4) +
                                  record("q2", "View size", "<p>The view is wrong</p>", "<code>View</code> measure",
                                         1, 0) +
                                  record("q3", "Iterator remove", "remove throws", "Use the iterator remove", -2, 5);

TEST(QaIndex, HandBuiltPostings) {
  const QaIndex index(parse_qa_corpus(kThreeRecords));
  ASSERT_EQ(index.size(), 3u);
  using P = QaIndex::Posting;
  // Normalized terms: stopwords dropped, light stemming applied.
  EXPECT_EQ(index.postings("iterator"), (std::vector<P>{{0, 2}, {2, 2}}));
  EXPECT_EQ(index.postings("skip"), (std::vector<P>{{0, 2}}));
  EXPECT_EQ(index.postings("view"), (std::vector<P>{{1, 3}}));
  EXPECT_EQ(index.postings("remove"), (std::vector<P>{{2, 3}}));
  EXPECT_EQ(index.postings("hasnext"), (std::vector<P>{{0, 1}}));
  EXPECT_TRUE(index.postings("the").empty());
  EXPECT_TRUE(index.postings("absent").empty());
  EXPECT_EQ(index.documents()[1].quality(), 1);
  EXPECT_EQ(index.documents()[0].question_body.tokens, (TokenList{"my", "iterator", "skips", "items"}));
}

TEST(QaCorpus, Errors) {
  EXPECT_THROW(parse_qa_corpus(""), InputError);
  EXPECT_THROW(parse_qa_corpus("\n\n"), InputError);
  try {
    parse_qa_corpus(record("q1", "t", "b", "a", 1, 1) +
                    "{\"id\":\"q2\",\"question_title\":\"t\",\"question_body\":\"b\",\"question_score\":1,"
                    "\"answer_score\":2}\n",
                    "qa.jsonl");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("qa.jsonl:2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("answer_body"), std::string::npos) << msg;
  }
  EXPECT_THROW(parse_qa_corpus("{not json}\n"), InputError);
  EXPECT_THROW(parse_qa_corpus(record("q1", "t", "b", "a", 1, 1) + record("q1", "t", "b", "a", 1, 1)), InputError);
}

TEST(QaCorpus, IndexFromFile) {
  testing::TempDir dir("qa");
  write_file(dir / "qa.jsonl", kThreeRecords);
  EXPECT_EQ(index_qa_corpus(dir / "qa.jsonl").size(), 3u);
  write_file(dir / "empty.jsonl", "");
  EXPECT_THROW(index_qa_corpus(dir / "empty.jsonl"), InputError);
}

TEST(RankQa, SingleDocumentWinsRegardlessOfScore) {
  const QaIndex index(parse_qa_corpus(record("q1", "Iterator", "iterator", "x", -50, -50)));
  const auto ranked = rank_qa(ApiName::parse("java.util.Iterator"), index);
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_EQ(ranked[0].document->id, "q1");
  EXPECT_DOUBLE_EQ(ranked[0].score, 1.0);
}

TEST(RankQa, EqualTextHigherQualityFirst) {
  const QaIndex index(parse_qa_corpus(record("a", "Iterator help", "iterator", "x", 0, 0) +
                                      record("b", "Iterator help", "iterator", "x", 4, 6)));
  const auto ranked = rank_qa(ApiName::parse("java.util.Iterator"), index);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].document->id, "b");
  EXPECT_DOUBLE_EQ(ranked[0].text_similarity, 1.0);
  EXPECT_DOUBLE_EQ(ranked[0].quality, 1.0);
  EXPECT_DOUBLE_EQ(ranked[0].score, 1.0);
  EXPECT_DOUBLE_EQ(ranked[1].text_similarity, 1.0);
  EXPECT_DOUBLE_EQ(ranked[1].quality, 0.0);
  EXPECT_DOUBLE_EQ(ranked[1].score, 0.5);
}

TEST(RankQa, NonMatchingMinimumQualityScoresZero) {
  const QaIndex index(parse_qa_corpus(record("a", "Iterator", "iterator", "x", 5, 5) +
                                      record("b", "Cooking", "pasta", "boil water", 0, 0)));
  const auto ranked = rank_qa(ApiName::parse("java.util.Iterator"), index);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[1].document->id, "b");
  EXPECT_DOUBLE_EQ(ranked[1].score, 0.0);
}

TEST(RankQa, TopKAndTies) {
  const QaIndex index(parse_qa_corpus(record("z", "Iterator", "iterator", "x", 1, 1) +
                                      record("m", "Iterator", "iterator", "x", 1, 1) +
                                      record("a", "Iterator", "iterator", "x", 1, 1)));
  const auto ranked = rank_qa(ApiName::parse("java.util.Iterator"), index, 2);
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].document->id, "a");
  EXPECT_EQ(ranked[1].document->id, "m");
}

std::string random_corpus(std::mt19937_64& rng, int docs, std::vector<int>* qualities = nullptr) {
  static const std::vector<std::string> vocab = {"iterator", "list", "loop", "remove", "next",
                                                 "view", "layout", "element", "java", "collection"};
  std::string out;
  for (int d = 0; d < docs; ++d) {
    std::string body;
    for (int k = 0; k < 1 + static_cast<int>(rng() % 6); ++k) body += vocab[rng() % vocab.size()] + " ";
    const int qs = static_cast<int>(rng() % 21) - 10;
    const int as = static_cast<int>(rng() % 21) - 5;
    if (qualities != nullptr) qualities->push_back(qs + as);
    out += record("d" + std::to_string(d), "t", body, "a", qs, as);
  }
  return out;
}

TEST(RankQa, ScoresBoundedSortedDeterministic) {
  std::mt19937_64 rng(17);
  const auto api = ApiName::parse("java.util.Iterator");
  for (int trial = 0; trial < 200; ++trial) {
    const QaIndex index(parse_qa_corpus(random_corpus(rng, 1 + static_cast<int>(rng() % 12))));
    const auto ranked = rank_qa(api, index);
    ASSERT_EQ(ranked.size(), index.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      EXPECT_GE(ranked[i].score, 0.0);
      EXPECT_LE(ranked[i].score, 1.0);
      if (i > 0) {
        EXPECT_LE(ranked[i].score, ranked[i - 1].score);
        if (ranked[i].score == ranked[i - 1].score) EXPECT_LT(ranked[i - 1].document->id, ranked[i].document->id);
      }
    }
    const auto again = rank_qa(api, index);
    for (std::size_t i = 0; i < ranked.size(); ++i) EXPECT_EQ(again[i].document, ranked[i].document);
  }
}

TEST(RankQa, UnrelatedLowQualityDocumentNeverDisplacesTop) {
  std::mt19937_64 rng(23);
  const auto api = ApiName::parse("java.util.Iterator");
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<int> qualities;
    const std::string base = random_corpus(rng, 1 + static_cast<int>(rng() % 10), &qualities);
    const QaIndex before(parse_qa_corpus(base));
    const auto top = rank_qa(api, before, 1);
    if (top.empty() || top[0].score <= 0.0) continue;
    const int max_quality = *std::max_element(qualities.begin(), qualities.end());
    const int q = max_quality - 1 - static_cast<int>(rng() % 5);
    const QaIndex after(parse_qa_corpus(base + record("zz", "cooking", "pasta sauce", "boil", q, 0)));
    EXPECT_EQ(rank_qa(api, after, 1)[0].document->id, top[0].document->id);
  }
}

TEST(CrowdExtension, PicksTheDocumentNamingTheApi) {
  const QaIndex index(parse_qa_corpus(record("a", "Loops", "how to loop", "use for", 50, 50) +
                                      record("b", "Traversal", "java.util.Iterator misbehaves", "call next", 0, 0) +
                                      record("c", "Layouts", "views", "measure", 9, 9)));
  const auto api = ApiName::parse("java.util.Iterator");
  const auto ext = crowd_extension(api, index);
  ASSERT_TRUE(ext.has_value());
  EXPECT_EQ(ext->source_doc_id, "b");
  EXPECT_EQ(ext->api.fqn, api.fqn);
  // Title, question and answer.
  EXPECT_EQ(ext->text.tokens, (TokenList{"traversal", "java.util.iterator", "misbehaves", "call", "next"}));
  const auto terms = index.query_terms(api);
  const auto ext_terms = normalize_terms(ext->text.tokens, NormalizationConfig::defaults());
  EXPECT_TRUE(std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
    return std::find(ext_terms.begin(), ext_terms.end(), t) != ext_terms.end();
  }));
}

TEST(CrowdExtension, NoneWithoutMatches) {
  const QaIndex index(parse_qa_corpus(record("a", "Loops", "how to loop", "use for", 50, 50)));
  EXPECT_FALSE(crowd_extension(ApiName::parse("android.view.View"), index).has_value());
  const QaIndex empty(std::vector<QaDocument>{});
  EXPECT_FALSE(crowd_extension(ApiName::parse("android.view.View"), empty).has_value());
  EXPECT_TRUE(rank_qa(ApiName::parse("android.view.View"), empty).empty());
}

TEST(Spec, IteratorEntry) {
  const auto spec = parse_spec(R"([{"fqn": "java.util.Iterator",
      "description": "An iterator over a collection.",
      "methods": ["hasNext", "next", "remove", "next"]}])");
  ASSERT_EQ(spec.size(), 1u);
  const auto& e = spec.at("java.util.Iterator");
  EXPECT_EQ(e.methods, (std::vector<std::string>{"hasNext", "next", "remove"}));
  EXPECT_EQ(e.description.tokens, (TokenList{"an", "iterator", "over", "a", "collection"}));
}

TEST(Spec, EmptyOrMissingMethods) {
  const auto spec = parse_spec(R"([{"fqn": "a.B", "description": "x", "methods": []}, {"fqn": "a.C"}])");
  EXPECT_TRUE(spec.at("a.B").methods.empty());
  EXPECT_TRUE(spec.at("a.C").methods.empty());
}

TEST(Spec, Errors) {
  EXPECT_THROW(parse_spec(R"([{"fqn": "a.B"}, {"fqn": "a.B"}])"), InputError);
  EXPECT_THROW(parse_spec(R"({"fqn": "a.B"})"), InputError);
  EXPECT_THROW(parse_spec(R"([{"description": "x"}])"), InputError);
  EXPECT_THROW(parse_spec("[oops"), InputError);
  EXPECT_THROW(parse_spec(R"([{"fqn": "a.B", "methods": "m"}])"), InputError);
}

TEST(KnowledgeBase, BuildsCrowdForEachApi) {
  const QaIndex index(parse_qa_corpus(kThreeRecords));
  const auto kb = build_knowledge(&index, parse_spec(R"([{"fqn": "java.util.Iterator", "methods": ["next"]}])"),
                                  {ApiName::parse("java.util.Iterator"), ApiName::parse("android.view.View"),
                                   ApiName::parse("x.Unmatched")});
  ASSERT_NE(kb.crowd_for("java.util.Iterator"), nullptr);
  ASSERT_NE(kb.crowd_for("android.view.View"), nullptr);
  EXPECT_EQ(kb.crowd_for("android.view.View")->source_doc_id, "q2");
  EXPECT_EQ(kb.crowd_for("x.Unmatched"), nullptr);
  EXPECT_NE(kb.spec_for("java.util.Iterator"), nullptr);
  EXPECT_EQ(kb.spec_for("android.view.View"), nullptr);
}

}  // namespace
}  // namespace apifrag
