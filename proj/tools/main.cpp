#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "apifrag/error.hpp"
#include "apifrag/evaluation.hpp"
#include "apifrag/synthetic.hpp"
#include "apifrag/util.hpp"
#include "apifrag/workspace.hpp"

namespace fs = std::filesystem;
using namespace apifrag;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitBadInput = 2;

struct Flags {
  std::string data_dir;
  std::string tutorials, labels, known_apis, qa, spec;
  std::string cache_dir;
  std::string out_dir = "out";
  int split_level = kMaxHeadingLevel;
  std::string similarity = "word2vec";
  std::string mask = "1+2+3";
  int max_depth = 10;
  std::size_t min_samples_leaf = 2;
  std::uint64_t seed = 1;
  std::uint32_t dimension = 100;
  std::uint32_t window = 5;
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 5;
  std::uint32_t min_count = 1;
  double learning_rate = 0.025;
};

void add_run_options(CLI::App& app, Flags& f) {
  app.add_option("--data-dir", f.data_dir, "Directory with tutorials/, labels.csv, known_apis.txt, qa.jsonl, spec.json");
  app.add_option("--tutorials", f.tutorials, "Directory of tutorial HTML files");
  app.add_option("--labels", f.labels, "Labels CSV");
  app.add_option("--known-apis", f.known_apis, "Known API list");
  app.add_option("--qa", f.qa, "Q&A corpus (JSON lines)");
  app.add_option("--spec", f.spec, "API specification JSON");
  app.add_option("--cache-dir", f.cache_dir, "Cache for trained embeddings (default: <out-dir>/cache)");
  app.add_option("--out-dir", f.out_dir, "Output directory")->capture_default_str();
  app.add_option("--split-level", f.split_level, "Deepest heading level that starts a fragment")
      ->check(CLI::Range(kMinHeadingLevel, kMaxHeadingLevel))
      ->capture_default_str();
  app.add_option("--similarity", f.similarity, "word2vec, bigram, levenshtein, jaccard or cosine")->capture_default_str();
  app.add_option("--mask", f.mask, "Feature groups, e.g. 1+2+3")->capture_default_str();
  app.add_option("--max-depth", f.max_depth, "Tree depth limit")->capture_default_str();
  app.add_option("--min-samples-leaf", f.min_samples_leaf, "Minimum samples per leaf")->capture_default_str();
  app.add_option("--seed", f.seed, "Seed for embeddings and the tree")->capture_default_str();
  app.add_option("--dimension", f.dimension, "Embedding dimension")->capture_default_str();
  app.add_option("--window", f.window, "Embedding context window")->capture_default_str();
  app.add_option("--negatives", f.negatives, "Negative samples per context word")->capture_default_str();
  app.add_option("--epochs", f.epochs, "Embedding epochs")->capture_default_str();
  app.add_option("--min-count", f.min_count, "Minimum word count")->capture_default_str();
  app.add_option("--learning-rate", f.learning_rate, "Initial embedding learning rate")->capture_default_str();
}

RunConfig to_run_config(const Flags& f) {
  RunConfig c = f.data_dir.empty() ? RunConfig{} : RunConfig::for_directory(f.data_dir);
  const auto set = [](fs::path& target, const std::string& value) {
    if (!value.empty()) target = value;
  };
  set(c.tutorials, f.tutorials);
  set(c.labels, f.labels);
  set(c.known_apis, f.known_apis);
  set(c.qa_corpus, f.qa);
  set(c.spec_file, f.spec);
  c.out_dir = f.out_dir;
  c.cache_dir = f.cache_dir.empty() ? c.out_dir / "cache" : fs::path(f.cache_dir);
  c.split_level = f.split_level;
  const auto kind = parse_similarity_kind(f.similarity);
  if (!kind) throw InputError("unknown similarity: " + f.similarity);
  c.sim_kind = *kind;
  c.mask = GroupMask::parse(f.mask);
  c.tree.max_depth = f.max_depth;
  c.tree.min_samples_leaf = f.min_samples_leaf;
  c.tree.seed = f.seed;
  c.embedding.dimension = f.dimension;
  c.embedding.window = f.window;
  c.embedding.negatives = f.negatives;
  c.embedding.epochs = f.epochs;
  c.embedding.min_count = f.min_count;
  c.embedding.learning_rate = f.learning_rate;
  c.embedding.seed = f.seed;
  return c;
}

void warn_all(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) fmt::print(stderr, "warning: {}\n", w);
}

void write_output(const RunConfig& c, const std::string& name, const std::string& content) {
  fs::create_directories(c.out_dir);
  write_file(c.out_dir / name, content);
  fmt::print("wrote {}\n", (c.out_dir / name).string());
}

std::string stats_table(const Dataset& d) {
  std::string out = fmt::format("{:<24} {:>6} {:>10} {:>6} {:>9} {:>8}\n", "tutorial", "apis", "fragments", "pairs",
                                "relevant", "unknown");
  const auto row = [&](const std::string& name, const DatasetStats& s) {
    out += fmt::format("{:<24} {:>6} {:>10} {:>6} {:>9} {:>8}\n", name, s.apis, s.fragments, s.pairs, s.relevant,
                       s.unknown);
  };
  for (const auto& t : d.tutorials) row(t.id, d.compute_stats(t.id));
  row("total", d.stats);
  return out;
}

int cmd_ingest(const RunConfig& c) {
  c.validate();
  const Dataset d = load_dataset(c.tutorials, c.labels, c.known_apis, c.split_level);
  write_output(c, "dataset.json", dataset_to_json(d, input_hash(c)));
  fmt::print("{}", stats_table(d));
  return kExitOk;
}

int cmd_embed(const RunConfig& c) {
  std::vector<std::string> warnings;
  const auto ws = Workspace::open(c, true, &warnings);
  warn_all(warnings);
  fmt::print("embeddings: {} words, dimension {}{}\n", ws->embeddings()->size(), ws->embeddings()->dimension(),
             ws->embeddings_from_cache() ? " (cached)" : "");
  return kExitOk;
}

int cmd_features(const RunConfig& c) {
  std::vector<std::string> warnings;
  const auto ws = Workspace::open(c, c.sim_kind == SimilarityKind::Word2Vec, &warnings);
  warn_all(warnings);
  const auto features = labeled_features(ws->resources(), c.sim_kind);
  std::vector<Label> labels;
  for (auto i : ws->dataset().labeled_pair_indices()) labels.push_back(ws->dataset().pairs[i].label);
  write_output(c, "features.csv", features_to_csv(features, labels));
  return kExitOk;
}

int cmd_evaluate(const RunConfig& c, const std::string& which) {
  const bool needs_embeddings = which == "rq1" || which == "rq2" || which == "rq3" ||
                                (which == "single" && c.sim_kind == SimilarityKind::Word2Vec);
  std::vector<std::string> warnings;
  const auto ws = Workspace::open(c, needs_embeddings, &warnings);
  warn_all(warnings);
  ExperimentReport report;
  if (which == "single") {
    report = run_single(ws->resources(), c.sim_kind, c.mask);
  } else if (which == "rq1") {
    report = run_rq1(ws->resources());
  } else if (which == "rq2") {
    report = run_rq2(ws->resources());
  } else {
    report = run_rq3(ws->resources());
  }
  write_output(c, which + ".json", report.to_json());
  write_output(c, which + ".txt", report.to_table());
  fmt::print("{}", report.to_table());
  return kExitOk;
}

int cmd_predict(const RunConfig& c, const std::string& api, const std::string& tutorial) {
  std::vector<std::string> warnings;
  const auto ws = Workspace::open(c, c.sim_kind == SimilarityKind::Word2Vec, &warnings);
  warn_all(warnings);
  if (ws->dataset().find_tutorial(tutorial) == nullptr) throw InputError("unknown tutorial: " + tutorial);
  const DecisionTree model = ws->train_model();
  write_output(c, "model.json", model.to_json());
  const auto recs = ws->recommend(model, api, tutorial);
  if (recs.empty()) fmt::print("no relevant fragments for {} in {}\n", api, tutorial);
  for (const auto& r : recs) fmt::print("{:<8} {:.3f}  {}\n", r.fragment_id, r.confidence, r.title);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find the tutorial fragments that explain an API"};
  app.set_config("--config", "", "TOML-style key = value file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  add_run_options(app, flags);

  auto* ingest = app.add_subcommand("ingest", "Segment tutorials, detect APIs, apply labels");
  auto* embed = app.add_subcommand("embed", "Train (or load cached) word embeddings");
  auto* features = app.add_subcommand("features", "Export the feature matrix of labeled pairs as CSV");
  auto* evaluate = app.add_subcommand("evaluate", "Run an experiment");
  std::string which = "single";
  evaluate->add_option("--which", which, "single, rq1, rq2 or rq3")
      ->check(CLI::IsMember({"single", "rq1", "rq2", "rq3"}))
      ->capture_default_str();
  auto* predict = app.add_subcommand("predict", "List the fragments of a tutorial that explain an API");
  std::string api, tutorial;
  predict->add_option("--api", api, "Fully qualified API name")->required();
  predict->add_option("--tutorial", tutorial, "Tutorial id")->required();
  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus");
  std::string synth_out = "data/synthetic";
  synthetic::CorpusOptions synth_options;
  synth->add_option("--out", synth_out, "Destination directory")->capture_default_str();
  synth->add_option("--corpus-seed", synth_options.seed, "Generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    if (synth->parsed()) {
      synthetic::write_corpus(synth_out, synth_options);
      fmt::print("wrote synthetic corpus to {}\n", synth_out);
      return kExitOk;
    }
    const RunConfig config = to_run_config(flags);
    if (ingest->parsed()) return cmd_ingest(config);
    if (embed->parsed()) return cmd_embed(config);
    if (features->parsed()) return cmd_features(config);
    if (evaluate->parsed()) return cmd_evaluate(config, which);
    if (predict->parsed()) return cmd_predict(config, api, tutorial);
  } catch (const InputError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitBadInput;
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kExitInternal;
  }
  return kExitInternal;
}
