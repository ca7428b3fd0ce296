#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/text.hpp"
#include "apifrag/workspace.hpp"

namespace apifrag::testing {

std::filesystem::path fixture_path(std::string_view relative);
std::filesystem::path data_path(std::string_view relative);

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

Fragment make_fragment(std::string id, std::string title, std::vector<std::string> paragraphs,
                       std::vector<std::string> code_blocks = {});

/// Recursive edit distance straight from the definition.
std::size_t naive_edit_distance(std::string_view a, std::string_view b);

/// Text from raw words, one sentence, bypassing the tokenizer.
TextBlock words(std::initializer_list<const char*> tokens);

/// Sentences where "alpha" and "beta" always appear together among one set
/// of context words and "gamma" appears among a disjoint set.
std::vector<TokenList> cooccurrence_corpus(std::uint64_t seed, std::size_t sentences = 400);

/// The bundled synthetic corpus with embeddings, loaded once per process.
const Workspace& synthetic_workspace();

}  // namespace apifrag::testing
