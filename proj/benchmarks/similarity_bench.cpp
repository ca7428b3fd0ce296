#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "apifrag/similarity.hpp"
#include "apifrag/text.hpp"

namespace {

using namespace apifrag;

TextBlock random_text(std::mt19937_64& rng, std::size_t words) {
  static const char* vocab[] = {"iterator", "list", "next", "element", "collection", "view", "draw",
                                "button", "layout", "stream", "buffer", "cursor", "index", "loop"};
  std::string s;
  for (std::size_t i = 0; i < words; ++i) {
    s += vocab[rng() % std::size(vocab)];
    s += ' ';
  }
  return tokenize(s);
}

void BM_Similarity(benchmark::State& state) {
  const auto kind = static_cast<SimilarityKind>(state.range(0));
  std::mt19937_64 rng(1);
  const auto a = random_text(rng, static_cast<std::size_t>(state.range(1)));
  const auto b = random_text(rng, static_cast<std::size_t>(state.range(1)));
  const auto stats = CorpusStats::build(std::vector{a, b, random_text(rng, 50)});
  const SimilarityContext ctx{nullptr, &stats};
  for (auto _ : state) benchmark::DoNotOptimize(text_similarity(kind, a, b, ctx));
  state.SetLabel(std::string(to_string(kind)));
}

void lexical_kinds(benchmark::internal::Benchmark* b) {
  for (auto kind : {SimilarityKind::BiGram, SimilarityKind::Levenshtein, SimilarityKind::Jaccard,
                    SimilarityKind::Cosine}) {
    for (int words : {10, 100}) b->Args({static_cast<int>(kind), words});
  }
}
BENCHMARK(BM_Similarity)->Apply(lexical_kinds);

void BM_EditDistance(benchmark::State& state) {
  const std::string a(static_cast<std::size_t>(state.range(0)), 'a');
  std::string b = a;
  for (std::size_t i = 0; i < b.size(); i += 3) b[i] = 'b';
  for (auto _ : state) benchmark::DoNotOptimize(edit_distance(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_EditDistance)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNSquared);

void BM_Tokenize(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < state.range(0); ++i) text += "The java.util.Iterator walks a List, e.g. in a loop. ";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
