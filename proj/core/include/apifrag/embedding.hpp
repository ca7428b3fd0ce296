#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apifrag/text.hpp"

namespace apifrag {

/// Skip-gram with negative sampling hyperparameters.
struct EmbeddingConfig {
  std::uint32_t dimension = 100;
  std::uint32_t window = 5;
  std::uint32_t negatives = 5;
  std::uint32_t epochs = 5;
  std::uint32_t min_count = 1;
  /// Initial rate; decays linearly to 1e-4 of it over all epochs.
  double learning_rate = 0.025;
  std::uint64_t seed = 1;

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

/// Immutable word vectors. Vocabulary is ordered by descending count, then
/// alphabetically.
class EmbeddingModel {
 public:
  EmbeddingModel(EmbeddingConfig config, std::vector<std::string> words, std::vector<std::uint64_t> counts,
                 std::vector<float> vectors);

  std::uint32_t dimension() const noexcept { return config_.dimension; }
  std::size_t size() const noexcept { return words_.size(); }
  const EmbeddingConfig& config() const noexcept { return config_; }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }

  bool contains(std::string_view word) const { return index_.contains(word); }
  /// Empty span for out-of-vocabulary words.
  std::span<const float> vector(std::string_view word) const;

  /// Binary model: magic "AFWV", u32 version, u32 dimension, u32 vocab size,
  /// config (u32 window, u32 negatives, u32 epochs, u32 min_count,
  /// f64 learning rate, u64 seed), then per word a u32 byte length, the UTF-8
  /// bytes and `dimension` f32 values. All integers and floats little-endian.
  void write(std::ostream& out) const;
  static EmbeddingModel read(std::istream& in);

  /// Writes the binary model to `path` and a `word<TAB>count` manifest to
  /// `path` + ".vocab".
  void save(const std::filesystem::path& path) const;
  /// Throws InputError on a missing, truncated or foreign file.
  static EmbeddingModel load(const std::filesystem::path& path);

  friend bool operator==(const EmbeddingModel& a, const EmbeddingModel& b) {
    return a.config_ == b.config_ && a.words_ == b.words_ && a.vectors_ == b.vectors_;
  }

 private:
  EmbeddingConfig config_;
  std::vector<std::string> words_;
  std::vector<std::uint64_t> counts_;
  std::vector<float> vectors_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;

/// Trains skip-gram embeddings. Deterministic for a fixed config: sentence
/// order is shuffled and negatives drawn from one mt19937_64 stream seeded
/// with config.seed. `epoch_losses`, when given, receives after each epoch
/// the mean negative sampling loss over the corpus, scored with full windows
/// and a noise stream that is the same every epoch. Throws InputError for an
/// empty corpus or a corpus with no word reaching min_count.
EmbeddingModel train_embeddings(std::span<const TokenList> corpus, const EmbeddingConfig& config,
                                std::vector<double>* epoch_losses = nullptr);

using TextVector = std::vector<double>;

/// Mean of the in-vocabulary token vectors; zero vector if there are none.
TextVector embed_text(const TextBlock& text, const EmbeddingModel& model);

double cosine(std::span<const double> a, std::span<const double> b);

/// Cosine of the two text vectors; 0 when either is zero.
double word2vec_similarity(const TextBlock& t1, const TextBlock& t2, const EmbeddingModel& model);

}  // namespace apifrag
