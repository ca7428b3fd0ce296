#include "apifrag/features.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "apifrag/error.hpp"
#include "apifrag/util.hpp"

namespace apifrag {
namespace {

constexpr std::array<std::string_view, kFeatureCount> kFeatureNames = {
    "whole_api_fre", "part_api_fre",       "contain_code_fre", "instantiation_fre", "subject_fre",
    "in_condition_sen", "emerge_para_loc", "sem_simi",         "co_api_fre",        "co_api_fre_in_code",
    "whole_co_api_fre", "co_api_sen_pro",  "co_sem_simi",      "method_fre",        "is_method_in_title",
    "clue_word_count",  "ex_sem_simi"};

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

TokenList identifiers_of(const std::vector<std::string>& texts) {
  TokenList out;
  for (const auto& t : texts) {
    auto block = tokenize_preserving_case(t);
    out.insert(out.end(), block.tokens.begin(), block.tokens.end());
  }
  return out;
}

// Lowercase CamelCase words of every dot segment of an identifier token.
std::vector<std::string> words_of(std::string_view token) {
  std::vector<std::string> words;
  std::size_t start = 0;
  while (start <= token.size()) {
    const auto dot = token.find('.', start);
    const auto segment = token.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    for (auto& w : split_camel_case(segment)) words.push_back(std::move(w));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return words;
}

std::size_t count_mentions(const TokenList& lowercase_tokens, const ApiName& api) {
  return static_cast<std::size_t>(std::count_if(lowercase_tokens.begin(), lowercase_tokens.end(),
                                                [&](const std::string& t) { return token_mentions(t, api); }));
}

bool sentence_mentions(const TokenList& sentence, const ApiName& api) {
  return std::any_of(sentence.begin(), sentence.end(), [&](const std::string& t) { return token_mentions(t, api); });
}

TextBlock api_text(const ApiName& api) {
  TokenList tokens = api.component_words;
  tokens.push_back(to_lower(api.simple_name));
  return make_text(std::move(tokens));
}

TextBlock from_sentences(const std::vector<const TokenList*>& sentences) {
  TextBlock block;
  for (const TokenList* s : sentences) {
    block.tokens.insert(block.tokens.end(), s->begin(), s->end());
    block.sentences.push_back(*s);
  }
  block.raw = block.joined();
  return block;
}

std::string escape_regex(std::string_view s) {
  static const std::string kSpecial = R"(\^$.|?*+()[]{})";
  std::string out;
  for (char c : s) {
    if (kSpecial.find(c) != std::string::npos) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string_view feature_name(std::size_t index) { return kFeatureNames.at(index); }

int feature_group(std::size_t index) {
  if (index <= static_cast<std::size_t>(Feature::SemSimi)) return 1;
  if (index <= static_cast<std::size_t>(Feature::CoSemSimi)) return 2;
  if (index < kFeatureCount) return 3;
  throw Error("feature index out of range: " + std::to_string(index));
}

bool is_similarity_feature(std::size_t index) {
  return index == static_cast<std::size_t>(Feature::SemSimi) ||
         index == static_cast<std::size_t>(Feature::CoSemSimi) ||
         index == static_cast<std::size_t>(Feature::ExSemSimi);
}

GroupMask GroupMask::of(std::initializer_list<int> groups) {
  std::bitset<kGroupCount> bits;
  for (int g : groups) {
    if (g < 1 || g > 3) throw InputError("feature group must be 1, 2 or 3, got " + std::to_string(g));
    bits.set(static_cast<std::size_t>(g - 1));
  }
  if (bits.none()) throw InputError("at least one feature group must be enabled");
  return GroupMask(bits);
}

GroupMask GroupMask::from_bits(unsigned bits) {
  if (bits == 0 || bits > 0b111) throw InputError("group mask bits must be in 1..7");
  return GroupMask(std::bitset<kGroupCount>(bits));
}

GroupMask GroupMask::parse(std::string_view text) {
  std::bitset<kGroupCount> bits;
  for (char c : text) {
    if (c == '+' || c == ',' || c == ' ') continue;
    if (c < '1' || c > '3') throw InputError("bad feature group list '" + std::string(text) + "'");
    bits.set(static_cast<std::size_t>(c - '1'));
  }
  if (bits.none()) throw InputError("at least one feature group must be enabled");
  return GroupMask(bits);
}

std::string GroupMask::label() const {
  std::string out;
  for (int g = 1; g <= 3; ++g) {
    if (!contains(g)) continue;
    if (!out.empty()) out.push_back('+');
    out.push_back(static_cast<char>('0' + g));
  }
  return out;
}

const std::array<GroupMask, 7>& ablation_masks() {
  static const std::array<GroupMask, 7> kMasks = {
      GroupMask::of({1}),    GroupMask::of({2}),    GroupMask::of({3}),      GroupMask::of({1, 2}),
      GroupMask::of({1, 3}), GroupMask::of({2, 3}), GroupMask::of({1, 2, 3})};
  return kMasks;
}

TextBlock fragment_text(const Fragment& fragment) {
  std::vector<TextBlock> blocks;
  blocks.reserve(fragment.paragraphs.size());
  for (const auto& p : fragment.paragraphs) blocks.push_back(tokenize(p));
  std::vector<const TextBlock*> parts;
  for (const auto& b : blocks) parts.push_back(&b);
  return concat(parts);
}

AnalyzedFragment AnalyzedFragment::analyze(const Fragment& fragment, const NormalizationConfig& normalization) {
  AnalyzedFragment a;
  a.fragment = &fragment;
  std::vector<const TextBlock*> parts;
  for (const auto& p : fragment.paragraphs) a.paragraphs.push_back(tokenize(p));
  for (const auto& p : a.paragraphs) parts.push_back(&p);
  a.text = concat(parts);

  std::vector<TextBlock> code_blocks;
  for (const auto& c : fragment.code_blocks) code_blocks.push_back(tokenize(c));
  std::vector<const TextBlock*> code_parts;
  for (const auto& c : code_blocks) code_parts.push_back(&c);
  a.code = concat(code_parts);

  a.text_identifiers = identifiers_of(fragment.paragraphs);
  a.code_identifiers = identifiers_of(fragment.code_blocks);
  a.clue_words = apifrag::clue_words(a.text.tokens, normalization);
  return a;
}

std::size_t count_identifier(std::string_view text, std::string_view needle, bool allow_member_access) {
  if (needle.empty()) return 0;
  std::size_t count = 0;
  std::size_t pos = text.find(needle);
  while (pos != std::string_view::npos) {
    const bool left_ok = pos == 0 || (!is_ident_char(text[pos - 1]) && (allow_member_access || text[pos - 1] != '.'));
    const std::size_t end = pos + needle.size();
    const bool right_ok = end >= text.size() || !is_ident_char(text[end]);
    if (left_ok && right_ok) ++count;
    pos = text.find(needle, pos + 1);
  }
  return count;
}

std::size_t count_instantiations(std::string_view code, std::string_view simple_name) {
  if (simple_name.empty()) return 0;
  const std::string name = escape_regex(simple_name);
  const std::string generic = R"((?:\s*<[^;(){}]*>)?)";
  const std::regex construct(R"(\bnew\s+(?:[A-Za-z_][\w]*\.)*)" + name + generic + R"(\s*\()");
  const std::regex declare(R"((?:^|[^\w.])(?:[A-Za-z_][\w]*\.)*)" + name + generic +
                           R"(\s+[A-Za-z_]\w*\s*=(?!=))");
  const std::string s(code);
  const auto count = [&](const std::regex& re) {
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator()));
  };
  return count(construct) + count(declare);
}

Group1Features extract_group1(const ApiName& api, const AnalyzedFragment& a, SimilarityKind kind,
                              const SimilarityContext& similarity) {
  Group1Features g;
  const Fragment& f = *a.fragment;

  std::size_t whole = 0;
  for (const auto& p : f.paragraphs) whole += count_identifier(p, api.fqn, false);
  for (const auto& c : f.code_blocks) whole += count_identifier(c, api.fqn, false);
  g.whole_api_fre = static_cast<double>(whole);

  const std::set<std::string, std::less<>> components(api.component_words.begin(), api.component_words.end());
  std::size_t part = 0;
  for (const TokenList* ids : {&a.text_identifiers, &a.code_identifiers}) {
    for (const auto& token : *ids) {
      for (const auto& w : words_of(token)) part += components.count(w);
    }
  }
  g.part_api_fre = static_cast<double>(part);

  g.contain_code_fre = static_cast<double>(f.code_blocks.size());

  std::size_t inst = 0;
  for (const auto& c : f.code_blocks) inst += count_instantiations(c, api.simple_name);
  g.instantiation_fre = static_cast<double>(inst);

  std::size_t subjects = 0;
  bool in_condition = false;
  for (const auto& sentence : a.text.sentences) {
    if (subject_mentions(sentence, api)) ++subjects;
    if (!in_condition && is_condition_sentence(sentence) && sentence_mentions(sentence, api)) in_condition = true;
  }
  g.subject_fre = static_cast<double>(subjects);
  g.in_condition_sen = in_condition ? 1.0 : 0.0;

  g.emerge_para_loc = 1.0;
  for (const auto& p : a.paragraphs) {
    for (std::size_t i = 0; i < p.tokens.size(); ++i) {
      if (token_mentions(p.tokens[i], api)) {
        g.emerge_para_loc =
            std::min(g.emerge_para_loc, static_cast<double>(i) / static_cast<double>(p.tokens.size()));
        break;
      }
    }
  }

  g.sem_simi = text_similarity(kind, api_text(api), a.text, similarity);
  return g;
}

Group2Features extract_group2(const std::vector<ApiName>& co_apis, const AnalyzedFragment& a, SimilarityKind kind,
                              const SimilarityContext& similarity) {
  Group2Features g;
  if (co_apis.empty()) return g;

  std::size_t in_text = 0;
  std::size_t in_code = 0;
  double whole = 0.0;
  for (const auto& co : co_apis) {
    in_text += count_mentions(a.text.tokens, co);
    in_code += count_mentions(a.code.tokens, co);
    const std::set<std::string, std::less<>> components(co.component_words.begin(), co.component_words.end());
    for (const TokenList* ids : {&a.text_identifiers, &a.code_identifiers}) {
      for (const auto& token : *ids) {
        if (token_mentions(to_lower(token), co)) {
          whole += 1.0;
          continue;
        }
        for (const auto& w : words_of(token)) {
          if (components.contains(w)) whole += 0.5;
        }
      }
    }
  }
  g.co_api_fre = static_cast<double>(in_text);
  g.co_api_fre_in_code = static_cast<double>(in_code);
  g.whole_co_api_fre = whole;

  std::vector<const TokenList*> with_co;
  std::vector<const TokenList*> without_co;
  for (const auto& sentence : a.text.sentences) {
    const bool hit = std::any_of(co_apis.begin(), co_apis.end(),
                                 [&](const ApiName& co) { return sentence_mentions(sentence, co); });
    (hit ? with_co : without_co).push_back(&sentence);
  }
  if (!a.text.sentences.empty()) {
    g.co_api_sen_pro = static_cast<double>(with_co.size()) / static_cast<double>(a.text.sentences.size());
  }
  if (!with_co.empty() && !without_co.empty()) {
    g.co_sem_simi = text_similarity(kind, from_sentences(with_co), from_sentences(without_co), similarity);
  }
  return g;
}

Group3Features extract_group3(const AnalyzedFragment& a, const CrowdExtension* crowd_ext,
                              const SpecEntry* spec_entry, SimilarityKind kind, const SimilarityContext& similarity) {
  Group3Features g;
  const Fragment& f = *a.fragment;
  if (spec_entry != nullptr) {
    std::size_t methods = 0;
    bool in_title = false;
    for (const auto& m : spec_entry->methods) {
      for (const auto& p : f.paragraphs) methods += count_identifier(p, m, true);
      for (const auto& c : f.code_blocks) methods += count_identifier(c, m, true);
      if (count_identifier(f.title, m, true) > 0) in_title = true;
    }
    g.method_fre = static_cast<double>(methods);
    g.is_method_in_title = in_title ? 1.0 : 0.0;
  }
  if (crowd_ext != nullptr) {
    const std::set<std::string_view> crowd_terms(crowd_ext->text.tokens.begin(), crowd_ext->text.tokens.end());
    g.clue_word_count = static_cast<double>(std::count_if(
        a.clue_words.begin(), a.clue_words.end(), [&](const std::string& w) { return crowd_terms.contains(w); }));
    g.ex_sem_simi = text_similarity(kind, crowd_ext->text, a.text, similarity);
  }
  return g;
}

std::vector<ApiName> co_apis_of(const ApiName& api, const Fragment& fragment) {
  std::vector<ApiName> out;
  for (const auto& other : fragment.apis) {
    if (other.fqn != api.fqn) out.push_back(other);
  }
  return out;
}

namespace {

FeatureVector assemble(const ApiName& api, const AnalyzedFragment& a, const FeatureResources& resources,
                       SimilarityKind kind, GroupMask mask) {
  FeatureVector fv;
  fv.mask = mask;
  if (mask.contains(1)) {
    const auto g = extract_group1(api, a, kind, resources.similarity);
    fv[Feature::WholeApiFre] = g.whole_api_fre;
    fv[Feature::PartApiFre] = g.part_api_fre;
    fv[Feature::ContainCodeFre] = g.contain_code_fre;
    fv[Feature::InstantiationFre] = g.instantiation_fre;
    fv[Feature::SubjectFre] = g.subject_fre;
    fv[Feature::InConditionSen] = g.in_condition_sen;
    fv[Feature::EmergeParaLoc] = g.emerge_para_loc;
    fv[Feature::SemSimi] = g.sem_simi;
  }
  if (mask.contains(2)) {
    const auto g = extract_group2(co_apis_of(api, *a.fragment), a, kind, resources.similarity);
    fv[Feature::CoApiFre] = g.co_api_fre;
    fv[Feature::CoApiFreInCode] = g.co_api_fre_in_code;
    fv[Feature::WholeCoApiFre] = g.whole_co_api_fre;
    fv[Feature::CoApiSenPro] = g.co_api_sen_pro;
    fv[Feature::CoSemSimi] = g.co_sem_simi;
  }
  if (mask.contains(3)) {
    const CrowdExtension* crowd = resources.knowledge ? resources.knowledge->crowd_for(api.fqn) : nullptr;
    const SpecEntry* spec = resources.knowledge ? resources.knowledge->spec_for(api.fqn) : nullptr;
    const auto g = extract_group3(a, crowd, spec, kind, resources.similarity);
    fv[Feature::MethodFre] = g.method_fre;
    fv[Feature::IsMethodInTitle] = g.is_method_in_title;
    fv[Feature::ClueWordCount] = g.clue_word_count;
    fv[Feature::ExSemSimi] = g.ex_sem_simi;
  }
  return fv;
}

}  // namespace

FeatureVector extract_all(const ApiFragmentPair& pair, const Dataset& dataset, const FeatureResources& resources,
                          SimilarityKind kind, GroupMask mask) {
  const Fragment& fragment = dataset.fragment_of(pair);
  return assemble(pair.api, AnalyzedFragment::analyze(fragment, resources.normalization), resources, kind, mask);
}

std::vector<FeatureVector> extract_features(const Dataset& dataset, const std::vector<std::size_t>& pair_indices,
                                            const FeatureResources& resources, SimilarityKind kind, GroupMask mask) {
  std::map<const Fragment*, AnalyzedFragment> cache;
  std::vector<FeatureVector> out;
  out.reserve(pair_indices.size());
  for (const std::size_t i : pair_indices) {
    const ApiFragmentPair& pair = dataset.pairs.at(i);
    const Fragment& fragment = dataset.fragment_of(pair);
    auto it = cache.find(&fragment);
    if (it == cache.end()) {
      it = cache.emplace(&fragment, AnalyzedFragment::analyze(fragment, resources.normalization)).first;
    }
    out.push_back(assemble(pair.api, it->second, resources, kind, mask));
  }
  return out;
}

std::string features_to_csv(const std::vector<FeatureVector>& features, const std::vector<Label>& labels) {
  if (features.size() != labels.size()) throw Error("feature and label counts differ");
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < kFeatureCount; ++i) out << feature_name(i) << ',';
  out << "label\n";
  for (std::size_t r = 0; r < features.size(); ++r) {
    for (std::size_t i = 0; i < kFeatureCount; ++i) out << features[r].values[i] << ',';
    out << to_string(labels[r]) << '\n';
  }
  return out.str();
}

}  // namespace apifrag
