#include "apifrag/workspace.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <json.hpp>

#include "apifrag/error.hpp"
#include "apifrag/evaluation.hpp"
#include "apifrag/util.hpp"

namespace apifrag {
namespace fs = std::filesystem;

RunConfig RunConfig::for_directory(const fs::path& dir) {
  RunConfig c;
  c.tutorials = dir / "tutorials";
  c.labels = dir / "labels.csv";
  c.known_apis = dir / "known_apis.txt";
  if (fs::exists(dir / "qa.jsonl")) c.qa_corpus = dir / "qa.jsonl";
  c.spec_file = dir / "spec.json";
  return c;
}

void RunConfig::validate() const {
  const auto require = [](const fs::path& p, std::string_view what) {
    if (p.empty()) throw InputError(fmt::format("no {} given", what));
    if (!fs::exists(p)) throw InputError(fmt::format("{} not found: {}", what, p.string()));
  };
  require(tutorials, "tutorial directory");
  require(labels, "labels file");
  require(known_apis, "known API list");
  require(spec_file, "specification file");
  if (!qa_corpus.empty()) require(qa_corpus, "Q&A corpus");
  if (split_level < kMinHeadingLevel || split_level > kMaxHeadingLevel) {
    throw InputError(fmt::format("split level must be in {}..{}", kMinHeadingLevel, kMaxHeadingLevel));
  }
}

std::map<std::string, std::string> RunConfig::to_map() const {
  return {
      {"paths.tutorials", tutorials.string()},
      {"paths.labels", labels.string()},
      {"paths.known_apis", known_apis.string()},
      {"paths.qa_corpus", qa_corpus.string()},
      {"paths.spec_file", spec_file.string()},
      {"paths.cache_dir", cache_dir.string()},
      {"paths.out_dir", out_dir.string()},
      {"split_level", std::to_string(split_level)},
      {"similarity", std::string(to_string(sim_kind))},
      {"mask", mask.label()},
      {"tree.max_depth", std::to_string(tree.max_depth)},
      {"tree.min_samples_leaf", std::to_string(tree.min_samples_leaf)},
      {"tree.seed", std::to_string(tree.seed)},
      {"embedding.dimension", std::to_string(embedding.dimension)},
      {"embedding.window", std::to_string(embedding.window)},
      {"embedding.negatives", std::to_string(embedding.negatives)},
      {"embedding.epochs", std::to_string(embedding.epochs)},
      {"embedding.min_count", std::to_string(embedding.min_count)},
      {"embedding.learning_rate", fmt::format("{}", embedding.learning_rate)},
      {"embedding.seed", std::to_string(embedding.seed)},
  };
}

namespace {

std::string directory_hash(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::is_directory(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".html") files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::string acc;
  for (const auto& f : files) acc += f.filename().string() + ":" + file_hash(f) + ";";
  return hex64(fnv1a(acc));
}

}  // namespace

std::string input_hash(const RunConfig& c) {
  const std::string acc = fmt::format("{}|{}|{}|{}|{}|{}", directory_hash(c.tutorials), file_hash(c.labels),
                                      file_hash(c.known_apis), c.qa_corpus.empty() ? "none" : file_hash(c.qa_corpus),
                                      file_hash(c.spec_file), c.split_level);
  return hex64(fnv1a(acc));
}

std::string embedding_hash(const RunConfig& c) {
  const auto& e = c.embedding;
  const std::string acc = fmt::format("{}|{}|{}|{}|{}|{}|{}|{}|v{}", input_hash(c), e.dimension, e.window, e.negatives,
                                      e.epochs, e.min_count, e.learning_rate, e.seed, kEmbeddingFormatVersion);
  return hex64(fnv1a(acc));
}

std::string dataset_to_json(const Dataset& dataset, std::string_view config_hash) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = dataset.name;
  j["config_hash"] = config_hash;
  j["stats"] = {{"apis", dataset.stats.apis},
                {"fragments", dataset.stats.fragments},
                {"pairs", dataset.stats.pairs},
                {"relevant", dataset.stats.relevant},
                {"unknown", dataset.stats.unknown}};
  ordered_json tutorials = ordered_json::array();
  for (const auto& t : dataset.tutorials) {
    ordered_json fragments = ordered_json::array();
    for (const auto& f : t.fragments) {
      ordered_json apis = ordered_json::array();
      for (const auto& a : f.apis) apis.push_back(a.fqn);
      fragments.push_back({{"id", f.id},
                           {"title", f.title},
                           {"heading_level", f.heading_level},
                           {"word_count", f.word_count},
                           {"paragraphs", f.paragraphs},
                           {"code_blocks", f.code_blocks},
                           {"apis", apis}});
    }
    tutorials.push_back({{"id", t.id},
                         {"title", t.title},
                         {"source", t.source_path.filename().string()},
                         {"fragments", fragments}});
  }
  j["tutorials"] = tutorials;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : dataset.pairs) {
    pairs.push_back({{"tutorial_id", p.tutorial_id},
                     {"fragment_id", p.fragment_id},
                     {"api_fqn", p.api.fqn},
                     {"label", std::string(to_string(p.label))}});
  }
  j["pairs"] = pairs;
  return j.dump(2) + "\n";
}

std::unique_ptr<Workspace> Workspace::open(const RunConfig& config, bool with_embeddings,
                                           std::vector<std::string>* warnings) {
  config.validate();
  std::unique_ptr<Workspace> ws(new Workspace());
  ws->config_ = config;
  ws->dataset_ = load_dataset(config.tutorials, config.labels, config.known_apis, config.split_level);
  ws->known_ = load_known_apis(config.known_apis);
  if (!config.qa_corpus.empty()) ws->qa_.emplace(index_qa_corpus(config.qa_corpus));
  SpecMap spec = load_spec(config.spec_file);

  if (with_embeddings) {
    fs::path cache_file;
    if (!config.cache_dir.empty()) {
      cache_file = config.cache_dir / ("embeddings-" + embedding_hash(config) + ".afwv");
      if (fs::exists(cache_file)) {
        try {
          ws->embeddings_.emplace(EmbeddingModel::load(cache_file));
          ws->embeddings_cached_ = true;
        } catch (const InputError& e) {
          if (warnings != nullptr) {
            warnings->push_back(fmt::format("embedding cache {} is unusable ({}); rebuilding", cache_file.string(),
                                            e.what()));
          }
        }
      }
    }
    if (!ws->embeddings_) {
      const auto corpus = embedding_corpus(ws->dataset_, ws->qa_index(), spec);
      ws->embeddings_.emplace(train_embeddings(corpus, config.embedding));
      if (!cache_file.empty()) {
        fs::create_directories(config.cache_dir);
        ws->embeddings_->save(cache_file);
      }
    }
  }

  ws->knowledge_ = build_knowledge(ws->qa_index(), std::move(spec), dataset_apis(ws->dataset_));

  auto& r = ws->resources_;
  r.dataset = &ws->dataset_;
  r.knowledge = &ws->knowledge_;
  r.embeddings = ws->embeddings();
  r.fragment_stats = fragment_corpus_stats(ws->dataset_, r.normalization);
  r.tree = config.tree;
  r.snapshot = config.to_map();
  r.snapshot["input_hash"] = input_hash(config);
  if (with_embeddings) r.snapshot["embedding_hash"] = embedding_hash(config);
  return ws;
}

DecisionTree Workspace::train_model() const {
  const auto features = labeled_features(resources_, config_.sim_kind);
  const auto labeled = dataset_.labeled_pair_indices();
  std::vector<TrainingInstance> instances;
  instances.reserve(labeled.size());
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    instances.push_back({apply_mask(features[i], config_.mask), dataset_.pairs[labeled[i]].label});
  }
  if (instances.empty()) throw InputError("no labeled pairs to train on");
  return train_tree(instances, config_.tree);
}

std::vector<Recommendation> Workspace::recommend(const DecisionTree& model, std::string_view api_fqn,
                                                 std::string_view tutorial_id) const {
  const ApiName* known = known_.find(api_fqn);
  if (known == nullptr && knowledge_.spec_for(api_fqn) == nullptr) {
    throw InputError(fmt::format("unknown API: {}", api_fqn));
  }
  const ApiName api = known != nullptr ? *known : ApiName::parse(api_fqn);
  const Tutorial* tutorial = dataset_.find_tutorial(tutorial_id);
  if (tutorial == nullptr) throw InputError(fmt::format("unknown tutorial: {}", tutorial_id));

  // Feature extraction for an API absent from the training pairs still needs
  // its knowledge entries.
  KnowledgeBase knowledge = knowledge_;
  if (knowledge.crowd_for(api.fqn) == nullptr && qa_) {
    if (auto ext = crowd_extension(api, *qa_)) knowledge.crowd.emplace(api.fqn, std::move(*ext));
  }
  FeatureResources fr = resources_.feature_resources();
  fr.knowledge = &knowledge;

  std::vector<Recommendation> out;
  for (const auto& f : tutorial->fragments) {
    const bool mentioned =
        std::any_of(f.apis.begin(), f.apis.end(), [&](const ApiName& a) { return a.fqn == api.fqn; });
    if (!mentioned) continue;
    const ApiFragmentPair pair{api, tutorial->id, f.id, Label::Unknown};
    const auto fv = apply_mask(extract_all(pair, dataset_, fr, config_.sim_kind), model.mask());
    if (model.predict(fv) != Label::Relevant) continue;
    out.push_back({f.id, f.title, model.relevant_fraction(fv)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Recommendation& a, const Recommendation& b) { return a.confidence > b.confidence; });
  return out;
}

}  // namespace apifrag
