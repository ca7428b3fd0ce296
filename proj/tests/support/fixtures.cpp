#include "fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <system_error>

#include <unistd.h>

namespace apifrag::testing {
namespace fs = std::filesystem;

fs::path fixture_path(std::string_view relative) { return fs::path(APIFRAG_FIXTURES_DIR) / relative; }
fs::path data_path(std::string_view relative) { return fs::path(APIFRAG_DATA_DIR) / relative; }

TempDir::TempDir(std::string_view tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("apifrag-" + std::string(tag) + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Fragment make_fragment(std::string id, std::string title, std::vector<std::string> paragraphs,
                       std::vector<std::string> code_blocks) {
  Fragment f;
  f.id = std::move(id);
  f.title = std::move(title);
  f.paragraphs = std::move(paragraphs);
  f.code_blocks = std::move(code_blocks);
  for (const auto& p : f.paragraphs) f.word_count += tokenize(p).tokens.size();
  return f;
}

namespace {

// The textbook recursion over suffixes; the memo only avoids re-solving
// identical subproblems.
std::size_t edit_suffix(std::string_view a, std::string_view b, std::size_t i, std::size_t j,
                        std::vector<std::vector<std::size_t>>& memo) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  auto& slot = memo[i][j];
  if (slot != static_cast<std::size_t>(-1)) return slot;
  const std::size_t sub = edit_suffix(a, b, i + 1, j + 1, memo) + (a[i] == b[j] ? 0 : 1);
  const std::size_t del = edit_suffix(a, b, i + 1, j, memo) + 1;
  const std::size_t ins = edit_suffix(a, b, i, j + 1, memo) + 1;
  slot = std::min({sub, del, ins});
  return slot;
}

}  // namespace

std::size_t naive_edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::vector<std::size_t>> memo(a.size() + 1,
                                             std::vector<std::size_t>(b.size() + 1, static_cast<std::size_t>(-1)));
  return edit_suffix(a, b, 0, 0, memo);
}

TextBlock words(std::initializer_list<const char*> tokens) {
  TokenList list;
  for (const char* t : tokens) list.emplace_back(t);
  return make_text(std::move(list));
}

std::vector<TokenList> cooccurrence_corpus(std::uint64_t seed, std::size_t sentences) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> near = {"red", "green", "blue", "cyan", "pink", "gold", "gray", "teal"};
  const std::vector<std::string> far = {"one", "two", "three", "four", "five", "six", "seven", "eight"};
  std::vector<TokenList> corpus;
  for (std::size_t i = 0; i < sentences; ++i) {
    TokenList s;
    const bool pair = i % 2 == 0;
    const auto& context = pair ? near : far;
    for (int k = 0; k < 3; ++k) s.push_back(context[rng() % context.size()]);
    if (pair) {
      s.push_back("alpha");
      s.push_back("beta");
    } else {
      s.push_back("gamma");
    }
    for (int k = 0; k < 3; ++k) s.push_back(context[rng() % context.size()]);
    corpus.push_back(std::move(s));
  }
  return corpus;
}

const Workspace& synthetic_workspace() {
  static const auto ws = Workspace::open(RunConfig::for_directory(data_path("synthetic")), true);
  return *ws;
}

}  // namespace apifrag::testing
