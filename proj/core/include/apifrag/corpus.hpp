#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace apifrag {

/// A class- or interface-level API, e.g. `java.util.Iterator`.
struct ApiName {
  std::string fqn;
  std::string simple_name;
  /// Lowercase CamelCase words of simple_name.
  std::vector<std::string> component_words;

  /// Throws InputError for an empty name or empty dot segments.
  static ApiName parse(std::string_view fqn);

  friend bool operator==(const ApiName& a, const ApiName& b) { return a.fqn == b.fqn; }
  friend bool operator<(const ApiName& a, const ApiName& b) { return a.fqn < b.fqn; }
};

enum class Label { Relevant, Irrelevant, Unknown };

std::string_view to_string(Label label);
/// Accepts relevant/irrelevant/unknown (any case) and 1/0, yes/no, true/false.
std::optional<Label> parse_label(std::string_view text);

inline constexpr int kMinHeadingLevel = 1;
inline constexpr int kMaxHeadingLevel = 4;

/// A tutorial segment delimited by headings.
struct Fragment {
  std::string id;
  std::string title;
  int heading_level = 1;
  std::vector<std::string> paragraphs;
  std::vector<std::string> code_blocks;
  /// Token count over paragraphs.
  std::size_t word_count = 0;
  /// Source HTML of the fragment region, heading included.
  std::string html;
  /// APIs detected in the fragment, in order of first occurrence.
  std::vector<ApiName> apis;
};

struct Tutorial {
  std::string id;
  std::string title;
  std::filesystem::path source_path;
  std::vector<Fragment> fragments;

  const Fragment* find_fragment(std::string_view fragment_id) const;
};

struct ApiFragmentPair {
  ApiName api;
  std::string tutorial_id;
  std::string fragment_id;
  Label label = Label::Unknown;
};

/// Per-tutorial counts. `apis`, `pairs` and `relevant` describe labeled
/// pairs only; `unknown` counts detected but unlabeled pairs.
struct DatasetStats {
  std::size_t apis = 0;
  std::size_t fragments = 0;
  std::size_t pairs = 0;
  std::size_t relevant = 0;
  std::size_t unknown = 0;

  friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};

struct Dataset {
  std::string name;
  std::vector<Tutorial> tutorials;
  std::vector<ApiFragmentPair> pairs;
  DatasetStats stats;

  const Tutorial* find_tutorial(std::string_view tutorial_id) const;
  const Fragment* find_fragment(std::string_view tutorial_id, std::string_view fragment_id) const;
  /// Like find_fragment() but throws InputError when absent.
  const Fragment& fragment_of(const ApiFragmentPair& pair) const;
  /// Indices into `pairs` whose label is Relevant or Irrelevant.
  std::vector<std::size_t> labeled_pair_indices() const;
  /// Labeled pair indices grouped by tutorial, in tutorial order.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> labeled_pairs_by_tutorial() const;

  DatasetStats compute_stats() const;
  /// Counts restricted to one tutorial; an empty id means all.
  DatasetStats compute_stats(std::string_view tutorial_id) const;
};

/// The set of APIs a corpus is searched for, indexed by fqn and simple name.
class KnownApis {
 public:
  KnownApis() = default;
  explicit KnownApis(const std::vector<ApiName>& apis);

  void add(const ApiName& api);
  bool empty() const noexcept { return apis_.empty(); }
  std::size_t size() const noexcept { return apis_.size(); }
  const std::vector<ApiName>& all() const noexcept { return apis_; }

  const ApiName* find(std::string_view fqn) const;
  /// All APIs whose simple name equals `simple_name` (case-sensitive), in
  /// insertion order.
  std::vector<const ApiName*> find_simple(std::string_view simple_name) const;
  /// Maps a documentation link such as `.../android/view/View.html#foo` to
  /// the known API whose fqn is the longest dotted suffix of the path.
  const ApiName* resolve_link(std::string_view href) const;

 private:
  std::vector<ApiName> apis_;
  std::map<std::string, std::size_t, std::less<>> by_fqn_;
  std::multimap<std::string, std::size_t, std::less<>> by_simple_;
};

/// One fqn per line; `#` comments and blank lines ignored.
KnownApis load_known_apis(const std::filesystem::path& path);

/// Splits a tutorial at headings h1..h`split_level`. Content before the first
/// heading becomes fragment "f0"; the n-th heading opens fragment "f<n>".
/// Throws InputError("empty tutorial") when html is blank.
Tutorial segment_tutorial(std::string_view html, int split_level = kMaxHeadingLevel,
                          std::string_view tutorial_id = "");

/// Detects APIs in a fragment region: documentation links resolving to a
/// known API, and code-like tokens (containing an uppercase letter or a dot)
/// equal to a known fqn or simple name. Result is duplicate-free in order of
/// first occurrence.
std::vector<ApiName> identify_apis(const Fragment& fragment, std::string_view raw_html,
                                   const KnownApis& known_apis);

/// Reads `tutorial_dir/*.html` (stem = tutorial id, sorted by name), detects
/// API-fragment pairs and applies the CSV labels
/// (`tutorial_id,fragment_id,api_fqn,label`). Detected pairs without a label
/// row are Unknown; labeled pairs are added even when detection missed them.
Dataset load_dataset(const std::filesystem::path& tutorial_dir,
                     const std::filesystem::path& labels_file,
                     const std::filesystem::path& known_apis_file,
                     int split_level = kMaxHeadingLevel);

}  // namespace apifrag
