#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apifrag/corpus.hpp"
#include "apifrag/knowledge.hpp"
#include "apifrag/similarity.hpp"
#include "apifrag/text.hpp"

namespace apifrag {

/// Feature positions in a FeatureVector. Group 1: raw API features, group 2:
/// co-occurrence API features, group 3: API extension features.
enum class Feature : std::size_t {
  WholeApiFre,
  PartApiFre,
  ContainCodeFre,
  InstantiationFre,
  SubjectFre,
  InConditionSen,
  EmergeParaLoc,
  SemSimi,
  CoApiFre,
  CoApiFreInCode,
  WholeCoApiFre,
  CoApiSenPro,
  CoSemSimi,
  MethodFre,
  IsMethodInTitle,
  ClueWordCount,
  ExSemSimi,
};

inline constexpr std::size_t kFeatureCount = 17;
inline constexpr std::size_t kGroupCount = 3;

std::string_view feature_name(std::size_t index);
/// 1, 2 or 3.
int feature_group(std::size_t index);
/// Features whose value depends on the similarity kind.
bool is_similarity_feature(std::size_t index);

/// Non-empty subset of the three feature groups.
class GroupMask {
 public:
  /// All groups enabled.
  GroupMask() : bits_(0b111) {}
  /// Throws InputError on an empty list or a group outside 1..3.
  static GroupMask of(std::initializer_list<int> groups);
  static GroupMask from_bits(unsigned bits);
  /// Parses "1+2+3", "1,3", "2".
  static GroupMask parse(std::string_view text);

  bool contains(int group) const { return group >= 1 && group <= 3 && bits_.test(static_cast<std::size_t>(group - 1)); }
  bool enables(std::size_t feature) const { return contains(feature_group(feature)); }
  unsigned bits() const { return static_cast<unsigned>(bits_.to_ulong()); }
  /// "1+2+3" style label.
  std::string label() const;

  friend bool operator==(const GroupMask&, const GroupMask&) = default;

 private:
  explicit GroupMask(std::bitset<kGroupCount> bits) : bits_(bits) {}
  std::bitset<kGroupCount> bits_;
};

/// The seven masks in report order: 1, 2, 3, 1+2, 1+3, 2+3, 1+2+3.
const std::array<GroupMask, 7>& ablation_masks();

struct FeatureVector {
  std::array<double, kFeatureCount> values{};
  /// Features of disabled groups are zero and must not reach the classifier.
  GroupMask mask;

  double operator[](Feature f) const { return values[static_cast<std::size_t>(f)]; }
  double& operator[](Feature f) { return values[static_cast<std::size_t>(f)]; }
  bool enabled(std::size_t feature) const { return mask.enables(feature); }
};

/// The fragment's paragraphs as one text; the document unit for tf-idf.
TextBlock fragment_text(const Fragment& fragment);

/// Per-fragment token streams shared by all pairs of that fragment.
struct AnalyzedFragment {
  const Fragment* fragment = nullptr;
  /// Lowercase, one block per paragraph.
  std::vector<TextBlock> paragraphs;
  /// All paragraphs, sentence structure kept.
  TextBlock text;
  TextBlock code;
  /// Case-preserving identifier tokens of paragraphs and of code blocks.
  TokenList text_identifiers;
  TokenList code_identifiers;
  std::vector<std::string> clue_words;

  static AnalyzedFragment analyze(const Fragment& fragment,
                                  const NormalizationConfig& normalization = NormalizationConfig::defaults());
};

struct Group1Features {
  double whole_api_fre = 0;
  double part_api_fre = 0;
  double contain_code_fre = 0;
  double instantiation_fre = 0;
  double subject_fre = 0;
  double in_condition_sen = 0;
  double emerge_para_loc = 1.0;
  double sem_simi = 0;
};

struct Group2Features {
  double co_api_fre = 0;
  double co_api_fre_in_code = 0;
  double whole_co_api_fre = 0;
  double co_api_sen_pro = 0;
  double co_sem_simi = 0;
};

struct Group3Features {
  double method_fre = 0;
  double is_method_in_title = 0;
  double clue_word_count = 0;
  double ex_sem_simi = 0;
};

/// Occurrences of `needle` in `text` not embedded in a longer identifier.
/// With `allow_member_access`, a preceding '.' still counts as a boundary
/// (method calls such as `it.hasNext()`).
std::size_t count_identifier(std::string_view text, std::string_view needle, bool allow_member_access);

/// `new Name(` and `Name var =` patterns (generic arguments and package
/// prefixes allowed) in one code block.
std::size_t count_instantiations(std::string_view code, std::string_view simple_name);

Group1Features extract_group1(const ApiName& api, const AnalyzedFragment& fragment, SimilarityKind kind,
                              const SimilarityContext& similarity);

/// `co_apis` are the other APIs detected in the fragment.
Group2Features extract_group2(const std::vector<ApiName>& co_apis, const AnalyzedFragment& fragment,
                              SimilarityKind kind, const SimilarityContext& similarity);

/// Either extension may be absent; the dependent features are then 0.
Group3Features extract_group3(const AnalyzedFragment& fragment, const CrowdExtension* crowd_ext,
                              const SpecEntry* spec_entry, SimilarityKind kind,
                              const SimilarityContext& similarity);

/// Everything feature extraction reads besides the dataset.
struct FeatureResources {
  const KnowledgeBase* knowledge = nullptr;
  SimilarityContext similarity;
  NormalizationConfig normalization = NormalizationConfig::defaults();
};

/// Co-occurrence APIs of a pair: the fragment's detected APIs minus the target.
std::vector<ApiName> co_apis_of(const ApiName& api, const Fragment& fragment);

/// Throws InputError if the pair's fragment is missing.
FeatureVector extract_all(const ApiFragmentPair& pair, const Dataset& dataset, const FeatureResources& resources,
                          SimilarityKind kind, GroupMask mask = GroupMask());

/// Features for many pairs, analyzing each fragment once.
std::vector<FeatureVector> extract_features(const Dataset& dataset, const std::vector<std::size_t>& pair_indices,
                                            const FeatureResources& resources, SimilarityKind kind,
                                            GroupMask mask = GroupMask());

/// CSV with a header of the 17 feature names plus "label".
std::string features_to_csv(const std::vector<FeatureVector>& features, const std::vector<Label>& labels);

}  // namespace apifrag
