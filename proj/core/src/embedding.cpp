#include "apifrag/embedding.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "apifrag/error.hpp"

namespace apifrag {
namespace {

constexpr std::array<char, 4> kMagic = {'A', 'F', 'W', 'V'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  std::array<unsigned char, sizeof(T)> bytes{};
  if constexpr (std::is_floating_point_v<T>) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits;
    std::memcpy(&bits, &value, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
  } else {
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), sizeof(T));
  if (!in) throw InputError("truncated embedding model");
  if constexpr (std::is_floating_point_v<T>) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
    T value;
    std::memcpy(&value, &bits, sizeof(T));
    return value;
  } else {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(static_cast<T>(bytes[i]) << (8 * i));
    return value;
  }
}

// Uniform double in [0, 1) from the top 53 bits; independent of the
// standard library's distribution implementations.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

double sigmoid(double x) { return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

}  // namespace

EmbeddingModel::EmbeddingModel(EmbeddingConfig config, std::vector<std::string> words,
                               std::vector<std::uint64_t> counts, std::vector<float> vectors)
    : config_(config), words_(std::move(words)), counts_(std::move(counts)), vectors_(std::move(vectors)) {
  if (config_.dimension == 0) throw InputError("embedding dimension must be positive");
  if (counts_.empty()) counts_.assign(words_.size(), 0);
  if (counts_.size() != words_.size() || vectors_.size() != words_.size() * config_.dimension) {
    throw InputError("embedding model sizes are inconsistent");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) throw InputError("duplicate word in embedding model: " + words_[i]);
  }
}

std::span<const float> EmbeddingModel::vector(std::string_view word) const {
  const auto it = index_.find(word);
  if (it == index_.end()) return {};
  return std::span<const float>(vectors_).subspan(it->second * config_.dimension, config_.dimension);
}

void EmbeddingModel::write(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kEmbeddingFormatVersion);
  put<std::uint32_t>(out, config_.dimension);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(words_.size()));
  put<std::uint32_t>(out, config_.window);
  put<std::uint32_t>(out, config_.negatives);
  put<std::uint32_t>(out, config_.epochs);
  put<std::uint32_t>(out, config_.min_count);
  put<double>(out, config_.learning_rate);
  put<std::uint64_t>(out, config_.seed);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(words_[i].size()));
    out.write(words_[i].data(), static_cast<std::streamsize>(words_[i].size()));
    for (std::uint32_t d = 0; d < config_.dimension; ++d) put<float>(out, vectors_[i * config_.dimension + d]);
  }
}

EmbeddingModel EmbeddingModel::read(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw InputError("not an embedding model file");
  const auto version = get<std::uint32_t>(in);
  if (version != kEmbeddingFormatVersion) {
    throw InputError("unsupported embedding model version " + std::to_string(version));
  }
  EmbeddingConfig config;
  config.dimension = get<std::uint32_t>(in);
  const auto vocab_size = get<std::uint32_t>(in);
  config.window = get<std::uint32_t>(in);
  config.negatives = get<std::uint32_t>(in);
  config.epochs = get<std::uint32_t>(in);
  config.min_count = get<std::uint32_t>(in);
  config.learning_rate = get<double>(in);
  config.seed = get<std::uint64_t>(in);
  if (config.dimension == 0 || config.dimension > (1U << 16)) throw InputError("implausible embedding dimension");

  std::vector<std::string> words;
  std::vector<float> vectors;
  words.reserve(vocab_size);
  vectors.reserve(static_cast<std::size_t>(vocab_size) * config.dimension);
  for (std::uint32_t i = 0; i < vocab_size; ++i) {
    const auto length = get<std::uint32_t>(in);
    if (length > (1U << 20)) throw InputError("implausible word length in embedding model");
    std::string word(length, '\0');
    in.read(word.data(), length);
    if (!in) throw InputError("truncated embedding model");
    words.push_back(std::move(word));
    for (std::uint32_t d = 0; d < config.dimension; ++d) vectors.push_back(get<float>(in));
  }
  return EmbeddingModel(config, std::move(words), {}, std::move(vectors));
}

void EmbeddingModel::save(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write embedding model: " + path.string());
    write(out);
    if (!out) throw Error("failed writing embedding model: " + path.string());
  }
  std::ofstream manifest(path.string() + ".vocab", std::ios::binary | std::ios::trunc);
  for (std::size_t i = 0; i < words_.size(); ++i) manifest << words_[i] << '\t' << counts_[i] << '\n';
}

EmbeddingModel EmbeddingModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open embedding model: " + path.string());
  EmbeddingModel model = read(in);
  if (in.peek() != std::char_traits<char>::eof()) throw InputError("trailing bytes in embedding model");

  std::ifstream manifest(path.string() + ".vocab");
  if (manifest) {
    std::string line;
    std::size_t i = 0;
    while (std::getline(manifest, line) && i < model.counts_.size()) {
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.substr(0, tab) != model.words_[i]) break;
      model.counts_[i++] = std::stoull(line.substr(tab + 1));
    }
  }
  return model;
}

EmbeddingModel train_embeddings(std::span<const TokenList> corpus, const EmbeddingConfig& config,
                                std::vector<double>* epoch_losses) {
  if (corpus.empty()) throw InputError("cannot train embeddings on an empty corpus");
  if (config.dimension == 0 || config.window == 0 || config.epochs == 0) {
    throw InputError("embedding dimension, window and epochs must be positive");
  }

  std::map<std::string, std::uint64_t, std::less<>> raw_counts;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence) ++raw_counts[token];
  }
  std::vector<std::pair<std::string, std::uint64_t>> vocab;
  for (const auto& [word, count] : raw_counts) {
    if (count >= config.min_count) vocab.emplace_back(word, count);
  }
  if (vocab.empty()) throw InputError("no word reaches min_count; embedding vocabulary is empty");
  std::stable_sort(vocab.begin(), vocab.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

  std::map<std::string, std::uint32_t, std::less<>> index;
  std::vector<std::string> words;
  std::vector<std::uint64_t> counts;
  for (const auto& [word, count] : vocab) {
    index.emplace(word, static_cast<std::uint32_t>(words.size()));
    words.push_back(word);
    counts.push_back(count);
  }

  std::vector<std::vector<std::uint32_t>> sentences;
  std::uint64_t total_words = 0;
  for (const auto& sentence : corpus) {
    std::vector<std::uint32_t> ids;
    for (const auto& token : sentence) {
      if (const auto it = index.find(token); it != index.end()) ids.push_back(it->second);
    }
    total_words += ids.size();
    if (ids.size() > 1) sentences.push_back(std::move(ids));
  }

  const std::size_t dim = config.dimension;
  const std::size_t n = words.size();
  std::mt19937_64 rng(config.seed);

  std::vector<float> input(n * dim);
  std::vector<float> output(n * dim, 0.0F);
  for (auto& v : input) v = static_cast<float>((unit(rng) - 0.5) / static_cast<double>(dim));

  // Noise distribution: unigram^0.75, sampled through its cumulative sum.
  std::vector<double> cumulative(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += std::pow(static_cast<double>(counts[i]), 0.75);
    cumulative[i] = acc;
  }
  const auto draw_negative = [&] {
    const double r = unit(rng) * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative.begin(), n - 1));
  };

  const double schedule_length = static_cast<double>(config.epochs) * static_cast<double>(total_words) + 1.0;
  std::uint64_t processed = 0;
  std::vector<std::size_t> order(sentences.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<float> grad(dim);

  // Mean negative-sampling loss over the whole corpus with full windows and a
  // fixed noise stream, so epochs are compared on the same samples.
  const auto objective = [&] {
    std::mt19937_64 eval_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
    double total = 0.0;
    std::uint64_t terms = 0;
    for (const auto& ids : sentences) {
      for (std::size_t pos = 0; pos < ids.size(); ++pos) {
        const float* center = &input[ids[pos] * dim];
        const std::size_t lo = pos >= config.window ? pos - config.window : 0;
        const std::size_t hi = std::min<std::size_t>(ids.size() - 1, pos + config.window);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          for (std::uint32_t k = 0; k <= config.negatives; ++k) {
            std::uint32_t target = ids[c];
            if (k > 0) {
              const double r = unit(eval_rng) * acc;
              const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
              target = static_cast<std::uint32_t>(std::min<std::size_t>(it - cumulative.begin(), n - 1));
              if (target == ids[c]) continue;
            }
            const float* out = &output[target * dim];
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += static_cast<double>(center[d]) * out[d];
            total -= log_sigmoid(k == 0 ? dot : -dot);
          }
          ++terms;
        }
      }
    }
    return terms == 0 ? 0.0 : total / static_cast<double>(terms);
  };

  if (epoch_losses != nullptr) epoch_losses->clear();
  for (std::uint32_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng() % i)]);
    }
    for (const std::size_t s : order) {
      const auto& ids = sentences[s];
      for (std::size_t pos = 0; pos < ids.size(); ++pos, ++processed) {
        const double progress = static_cast<double>(processed) / schedule_length;
        const float lr = static_cast<float>(config.learning_rate * std::max(1e-4, 1.0 - progress));
        const std::size_t reach = 1 + static_cast<std::size_t>(rng() % config.window);
        const std::size_t lo = pos >= reach ? pos - reach : 0;
        const std::size_t hi = std::min(ids.size() - 1, pos + reach);
        float* center = &input[ids[pos] * dim];
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          std::fill(grad.begin(), grad.end(), 0.0F);
          for (std::uint32_t k = 0; k <= config.negatives; ++k) {
            std::uint32_t target = ids[c];
            float label = 1.0F;
            if (k > 0) {
              target = draw_negative();
              if (target == ids[c]) continue;
              label = 0.0F;
            }
            float* out = &output[target * dim];
            double dot = 0.0;
            for (std::size_t d = 0; d < dim; ++d) dot += static_cast<double>(center[d]) * out[d];
            const float g = (label - static_cast<float>(sigmoid(dot))) * lr;
            for (std::size_t d = 0; d < dim; ++d) {
              grad[d] += g * out[d];
              out[d] += g * center[d];
            }
          }
          for (std::size_t d = 0; d < dim; ++d) center[d] += grad[d];
        }
      }
    }
    if (epoch_losses != nullptr) {
      epoch_losses->push_back(objective());
    }
  }

  return EmbeddingModel(config, std::move(words), std::move(counts), std::move(input));
}

TextVector embed_text(const TextBlock& text, const EmbeddingModel& model) {
  TextVector v(model.dimension(), 0.0);
  std::size_t hits = 0;
  for (const auto& token : text.tokens) {
    const auto w = model.vector(token);
    if (w.empty()) continue;
    for (std::size_t d = 0; d < v.size(); ++d) v[d] += w[d];
    ++hits;
  }
  if (hits > 0) {
    for (auto& x : v) x /= static_cast<double>(hits);
  }
  return v;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double word2vec_similarity(const TextBlock& t1, const TextBlock& t2, const EmbeddingModel& model) {
  return cosine(embed_text(t1, model), embed_text(t2, model));
}

}  // namespace apifrag
