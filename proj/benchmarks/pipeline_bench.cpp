#include <benchmark/benchmark.h>

#include "apifrag/embedding.hpp"
#include "apifrag/evaluation.hpp"
#include "apifrag/pipeline.hpp"
#include "apifrag/workspace.hpp"

namespace {

using namespace apifrag;

const Workspace& workspace() {
  static const auto ws =
      Workspace::open(RunConfig::for_directory(std::filesystem::path(APIFRAG_DATA_DIR) / "synthetic"), true);
  return *ws;
}

void BM_LoadDataset(benchmark::State& state) {
  const auto c = RunConfig::for_directory(std::filesystem::path(APIFRAG_DATA_DIR) / "synthetic");
  for (auto _ : state) benchmark::DoNotOptimize(load_dataset(c.tutorials, c.labels, c.known_apis));
}
BENCHMARK(BM_LoadDataset)->Unit(benchmark::kMillisecond);

void BM_TrainEmbeddings(benchmark::State& state) {
  const auto& ws = workspace();
  const auto corpus = embedding_corpus(ws.dataset(), ws.qa_index(), ws.knowledge().spec);
  EmbeddingConfig config;
  config.dimension = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train_embeddings(corpus, config));
}
BENCHMARK(BM_TrainEmbeddings)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_ExtractFeatures(benchmark::State& state) {
  const auto& ws = workspace();
  const auto kind = static_cast<SimilarityKind>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(labeled_features(ws.resources(), kind));
  state.SetLabel(std::string(to_string(kind)));
}
BENCHMARK(BM_ExtractFeatures)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

void BM_RunSingle(benchmark::State& state) {
  const auto& ws = workspace();
  for (auto _ : state) benchmark::DoNotOptimize(run_single(ws.resources(), SimilarityKind::Jaccard, GroupMask()));
}
BENCHMARK(BM_RunSingle)->Unit(benchmark::kMillisecond);

}  // namespace
