#include "apifrag/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "apifrag/error.hpp"
#include "apifrag/html.hpp"
#include "apifrag/text.hpp"
#include "apifrag/util.hpp"

namespace apifrag {
namespace {

const std::set<std::string, std::less<>>& block_tags() {
  static const std::set<std::string, std::less<>> kTags = {
      "address", "article", "aside", "blockquote", "body", "br", "caption", "dd", "details",
      "div", "dl", "dt", "figcaption", "figure", "footer", "form", "h5", "h6", "header",
      "hr", "li", "main", "nav", "ol", "p", "section", "summary", "table", "tbody", "td",
      "tfoot", "th", "thead", "tr", "ul"};
  return kTags;
}

bool is_code_tag(const html::Token& tag) {
  static const std::set<std::string, std::less<>> kCodeTags = {"pre", "codeblock", "codebox", "listing",
                                                              "xmp"};
  if (kCodeTags.contains(tag.name)) return true;
  if (const auto cls = tag.attribute("class")) {
    const std::string lowered = to_lower(*cls);
    for (std::string_view marker : {"codeblock", "codebox", "code-block", "programlisting"}) {
      if (lowered.find(marker) != std::string::npos) return true;
    }
  }
  return false;
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) != 0) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::size_t count_words(const std::vector<std::string>& paragraphs) {
  std::size_t n = 0;
  for (const auto& p : paragraphs) n += tokenize(p).tokens.size();
  return n;
}

class Segmenter {
 public:
  Segmenter(std::string_view source, int split_level) : source_(source), split_level_(split_level) {}

  Tutorial run(std::string_view tutorial_id) {
    Tutorial tutorial;
    tutorial.id = std::string(tutorial_id);
    current_.id = "f0";
    current_.heading_level = kMinHeadingLevel;

    for (const auto& token : html::tokenize(source_)) handle(token);
    finish_fragment(source_.size());

    tutorial.title = collapse_whitespace(page_title_);
    if (tutorial.title.empty() && !fragments_.empty()) {
      for (const auto& f : fragments_) {
        if (!f.title.empty()) {
          tutorial.title = f.title;
          break;
        }
      }
    }
    if (tutorial.title.empty()) tutorial.title = tutorial.id;
    if (heading_count_ == 0) {
      // No headings: the whole document is one fragment.
      if (fragments_.empty()) {
        Fragment whole;
        whole.id = "f0";
        fragments_.push_back(std::move(whole));
      }
      fragments_.front().title = tutorial.title;
    }
    tutorial.fragments = std::move(fragments_);
    return tutorial;
  }

 private:
  void handle(const html::Token& token) {
    using html::TokenKind;
    if (token.kind == TokenKind::Text) {
      if (in_page_title_) {
        page_title_ += token.text;
      } else if (in_head_) {
        return;
      } else if (code_depth_ > 0) {
        code_ += token.text;
      } else if (in_heading_) {
        heading_text_ += token.text;
      } else {
        paragraph_ += token.text;
      }
      return;
    }

    const bool start = token.kind == TokenKind::StartTag;
    if (token.name == "title") {
      in_page_title_ = start && !token.self_closing;
      return;
    }
    if (token.name == "head") {
      in_head_ = start && !token.self_closing;
      return;
    }
    if (token.name == "body" && start) in_head_ = false;

    if (code_depth_ > 0) {
      // Inside a code region only its own tag name affects nesting.
      if (token.name == code_tag_) {
        if (start && !token.self_closing) {
          ++code_depth_;
        } else if (!start && --code_depth_ == 0) {
          close_code();
        }
      }
      return;
    }

    const int level = html::heading_level(token.name);
    if (level > 0 && level <= split_level_) {
      if (start) {
        finish_fragment(token.begin);
        open_fragment(level, token.begin);
      } else if (in_heading_) {
        in_heading_ = false;
        current_.title = collapse_whitespace(heading_text_);
      }
      return;
    }

    if (start && !token.self_closing && is_code_tag(token)) {
      flush_paragraph();
      code_tag_ = token.name;
      code_depth_ = 1;
      return;
    }
    if (block_tags().contains(token.name) || level > 0) {
      if (in_heading_) {
        heading_text_.push_back(' ');
      } else {
        flush_paragraph();
      }
    }
  }

  void open_fragment(int level, std::size_t offset) {
    ++heading_count_;
    current_ = Fragment{};
    current_.id = "f" + std::to_string(heading_count_);
    current_.heading_level = std::clamp(level, kMinHeadingLevel, kMaxHeadingLevel);
    region_begin_ = offset;
    in_heading_ = true;
    heading_text_.clear();
  }

  void flush_paragraph() {
    std::string text = collapse_whitespace(paragraph_);
    paragraph_.clear();
    if (!text.empty()) current_.paragraphs.push_back(std::move(text));
  }

  void close_code() {
    std::string text = trim(code_);
    code_.clear();
    code_tag_.clear();
    if (!text.empty()) current_.code_blocks.push_back(std::move(text));
  }

  void finish_fragment(std::size_t region_end) {
    if (code_depth_ > 0) {
      code_depth_ = 0;
      close_code();
    }
    if (in_heading_) {
      in_heading_ = false;
      current_.title = collapse_whitespace(heading_text_);
    }
    flush_paragraph();
    const bool preamble = current_.id == "f0";
    if (!preamble || !current_.paragraphs.empty() || !current_.code_blocks.empty()) {
      current_.word_count = count_words(current_.paragraphs);
      current_.html = std::string(source_.substr(region_begin_, region_end - region_begin_));
      fragments_.push_back(std::move(current_));
    }
    current_ = Fragment{};
  }

  std::string_view source_;
  int split_level_;
  std::vector<Fragment> fragments_;
  Fragment current_;
  std::size_t region_begin_ = 0;
  std::size_t heading_count_ = 0;
  std::string paragraph_;
  std::string code_;
  std::string code_tag_;
  int code_depth_ = 0;
  std::string heading_text_;
  bool in_heading_ = false;
  std::string page_title_;
  bool in_page_title_ = false;
  bool in_head_ = false;
};

bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

// Identifier-like runs, keeping internal dots: "java.util.List", "HashMap".
std::vector<std::string> code_like_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_ident_char(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() &&
           (is_ident_char(text[j]) || (text[j] == '.' && j + 1 < text.size() && is_ident_char(text[j + 1])))) {
      ++j;
    }
    std::string_view token = text.substr(i, j - i);
    const bool dotted = token.find('.') != std::string_view::npos;
    const bool has_upper = std::any_of(token.begin(), token.end(),
                                       [](char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; });
    if (dotted || has_upper) out.emplace_back(token);
    i = j;
  }
  return out;
}

std::vector<std::string> split_dots(std::string_view s) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = s.find('.', start);
    parts.emplace_back(s.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

std::string join_segments(const std::vector<std::string>& parts, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back('.');
    out += parts[i];
  }
  return out;
}

class ApiCollector {
 public:
  explicit ApiCollector(const KnownApis& known) : known_(known) {}

  void add(const ApiName* api) {
    if (api != nullptr && seen_.insert(api->fqn).second) result_.push_back(*api);
  }

  void scan_text(std::string_view text) {
    for (const auto& token : code_like_tokens(text)) {
      if (token.find('.') == std::string::npos) {
        for (const ApiName* api : known_.find_simple(token)) add(api);
        continue;
      }
      const auto parts = split_dots(token);
      bool matched = false;
      for (std::size_t len = parts.size(); len >= 1 && !matched; --len) {
        if (const ApiName* api = known_.find(join_segments(parts, 0, len))) {
          add(api);
          matched = true;
        }
      }
      if (matched) continue;
      for (const auto& part : parts) {
        const auto candidates = known_.find_simple(part);
        if (!candidates.empty()) {
          for (const ApiName* api : candidates) add(api);
          break;
        }
      }
    }
  }

  std::vector<ApiName> take() { return std::move(result_); }

 private:
  const KnownApis& known_;
  std::set<std::string, std::less<>> seen_;
  std::vector<ApiName> result_;
};

}  // namespace

ApiName ApiName::parse(std::string_view fqn) {
  const std::string trimmed = trim(fqn);
  if (trimmed.empty()) throw InputError("empty API name");
  ApiName api;
  api.fqn = trimmed;
  for (const auto& part : split_dots(trimmed)) {
    if (part.empty()) throw InputError("malformed API name: " + trimmed);
  }
  const auto dot = trimmed.rfind('.');
  api.simple_name = dot == std::string::npos ? trimmed : trimmed.substr(dot + 1);
  api.component_words = split_camel_case(api.simple_name);
  if (api.component_words.empty()) throw InputError("API name has no words: " + trimmed);
  return api;
}

std::string_view to_string(Label label) {
  switch (label) {
    case Label::Relevant:
      return "relevant";
    case Label::Irrelevant:
      return "irrelevant";
    case Label::Unknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<Label> parse_label(std::string_view text) {
  const std::string v = to_lower(trim(text));
  if (v == "relevant" || v == "1" || v == "yes" || v == "true") return Label::Relevant;
  if (v == "irrelevant" || v == "0" || v == "no" || v == "false") return Label::Irrelevant;
  if (v == "unknown" || v == "?") return Label::Unknown;
  return std::nullopt;
}

const Fragment* Tutorial::find_fragment(std::string_view fragment_id) const {
  for (const auto& f : fragments) {
    if (f.id == fragment_id) return &f;
  }
  return nullptr;
}

const Tutorial* Dataset::find_tutorial(std::string_view tutorial_id) const {
  for (const auto& t : tutorials) {
    if (t.id == tutorial_id) return &t;
  }
  return nullptr;
}

const Fragment* Dataset::find_fragment(std::string_view tutorial_id, std::string_view fragment_id) const {
  const Tutorial* t = find_tutorial(tutorial_id);
  return t == nullptr ? nullptr : t->find_fragment(fragment_id);
}

const Fragment& Dataset::fragment_of(const ApiFragmentPair& pair) const {
  const Fragment* f = find_fragment(pair.tutorial_id, pair.fragment_id);
  if (f == nullptr) {
    throw InputError("pair (" + pair.api.fqn + ", " + pair.tutorial_id + "/" + pair.fragment_id +
                     ") references a missing fragment");
  }
  return *f;
}

std::vector<std::size_t> Dataset::labeled_pair_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].label != Label::Unknown) out.push_back(i);
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> Dataset::labeled_pairs_by_tutorial() const {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
  for (const auto& t : tutorials) groups.emplace_back(t.id, std::vector<std::size_t>{});
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].label == Label::Unknown) continue;
    for (auto& [id, indices] : groups) {
      if (id == pairs[i].tutorial_id) {
        indices.push_back(i);
        break;
      }
    }
  }
  std::erase_if(groups, [](const auto& g) { return g.second.empty(); });
  return groups;
}

DatasetStats Dataset::compute_stats() const { return compute_stats({}); }

DatasetStats Dataset::compute_stats(std::string_view tutorial_id) const {
  DatasetStats s;
  std::set<std::string, std::less<>> apis;
  for (const auto& t : tutorials) {
    if (tutorial_id.empty() || t.id == tutorial_id) s.fragments += t.fragments.size();
  }
  for (const auto& p : pairs) {
    if (!tutorial_id.empty() && p.tutorial_id != tutorial_id) continue;
    if (p.label == Label::Unknown) {
      ++s.unknown;
      continue;
    }
    ++s.pairs;
    apis.insert(p.api.fqn);
    if (p.label == Label::Relevant) ++s.relevant;
  }
  s.apis = apis.size();
  return s;
}

KnownApis::KnownApis(const std::vector<ApiName>& apis) {
  for (const auto& api : apis) add(api);
}

void KnownApis::add(const ApiName& api) {
  if (by_fqn_.contains(api.fqn)) return;
  by_fqn_.emplace(api.fqn, apis_.size());
  by_simple_.emplace(api.simple_name, apis_.size());
  apis_.push_back(api);
}

const ApiName* KnownApis::find(std::string_view fqn) const {
  const auto it = by_fqn_.find(fqn);
  return it == by_fqn_.end() ? nullptr : &apis_[it->second];
}

std::vector<const ApiName*> KnownApis::find_simple(std::string_view simple_name) const {
  std::vector<std::size_t> indices;
  const auto [first, last] = by_simple_.equal_range(simple_name);
  for (auto it = first; it != last; ++it) indices.push_back(it->second);
  std::sort(indices.begin(), indices.end());
  std::vector<const ApiName*> out;
  for (auto i : indices) out.push_back(&apis_[i]);
  return out;
}

const ApiName* KnownApis::resolve_link(std::string_view href) const {
  std::string_view path = href;
  if (const auto cut = path.find_first_of("#?"); cut != std::string_view::npos) path = path.substr(0, cut);
  if (const auto scheme = path.find("://"); scheme != std::string_view::npos) {
    const auto slash = path.find('/', scheme + 3);
    path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
  }
  for (std::string_view ext : {".html", ".htm"}) {
    if (path.ends_with(ext)) {
      path.remove_suffix(ext.size());
      break;
    }
  }
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto sep = path.find_first_of("/.", start);
    const auto part = path.substr(start, sep == std::string_view::npos ? std::string_view::npos : sep - start);
    if (!part.empty()) parts.emplace_back(part);
    if (sep == std::string_view::npos) break;
    start = sep + 1;
  }
  for (std::size_t begin = 0; begin < parts.size(); ++begin) {
    if (const ApiName* api = find(join_segments(parts, begin, parts.size()))) return api;
  }
  return nullptr;
}

KnownApis load_known_apis(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  KnownApis known;
  std::string line;
  while (std::getline(in, line)) {
    const std::string value = trim(line);
    if (value.empty() || value.front() == '#') continue;
    known.add(ApiName::parse(value));
  }
  return known;
}

Tutorial segment_tutorial(std::string_view html, int split_level, std::string_view tutorial_id) {
  if (split_level < kMinHeadingLevel || split_level > kMaxHeadingLevel) {
    throw InputError("split level must be in 1..4, got " + std::to_string(split_level));
  }
  if (trim(html).empty()) throw InputError("empty tutorial");
  return Segmenter(html, split_level).run(tutorial_id);
}

std::vector<ApiName> identify_apis(const Fragment& fragment, std::string_view raw_html,
                                   const KnownApis& known_apis) {
  ApiCollector collector(known_apis);
  if (!raw_html.empty()) {
    for (const auto& token : html::tokenize(raw_html)) {
      if (token.kind == html::TokenKind::StartTag && token.name == "a") {
        if (const auto href = token.attribute("href")) collector.add(known_apis.resolve_link(*href));
      } else if (token.kind == html::TokenKind::Text) {
        collector.scan_text(token.text);
      }
    }
  } else {
    collector.scan_text(fragment.title);
    for (const auto& p : fragment.paragraphs) collector.scan_text(p);
    for (const auto& c : fragment.code_blocks) collector.scan_text(c);
  }
  return collector.take();
}

Dataset load_dataset(const std::filesystem::path& tutorial_dir, const std::filesystem::path& labels_file,
                     const std::filesystem::path& known_apis_file, int split_level) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(tutorial_dir)) throw InputError("tutorial directory not found: " + tutorial_dir.string());
  if (!fs::exists(labels_file)) throw InputError("labels file not found: " + labels_file.string());
  if (!fs::exists(known_apis_file)) throw InputError("known APIs file not found: " + known_apis_file.string());

  const KnownApis known = load_known_apis(known_apis_file);

  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(tutorial_dir)) {
    const auto ext = to_lower(entry.path().extension().string());
    if (entry.is_regular_file() && (ext == ".html" || ext == ".htm")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  Dataset dataset;
  dataset.name = fs::path(tutorial_dir).lexically_normal().filename().string();
  if (dataset.name.empty()) dataset.name = fs::path(tutorial_dir).lexically_normal().parent_path().filename().string();

  using PairKey = std::tuple<std::string, std::string, std::string>;
  std::map<PairKey, std::size_t> pair_index;

  for (const auto& file : files) {
    const std::string source = read_file(file);
    Tutorial tutorial;
    try {
      tutorial = segment_tutorial(source, split_level, file.stem().string());
    } catch (const InputError& e) {
      throw InputError(file.string() + ": " + e.what());
    }
    tutorial.source_path = file;
    for (auto& fragment : tutorial.fragments) {
      fragment.apis = identify_apis(fragment, fragment.html, known);
      for (const auto& api : fragment.apis) {
        pair_index.emplace(PairKey{api.fqn, tutorial.id, fragment.id}, dataset.pairs.size());
        dataset.pairs.push_back(ApiFragmentPair{api, tutorial.id, fragment.id, Label::Unknown});
      }
    }
    dataset.tutorials.push_back(std::move(tutorial));
  }

  std::istringstream labels(read_file(labels_file));
  std::string line;
  std::size_t line_no = 0;
  int col_tutorial = -1;
  int col_fragment = -1;
  int col_api = -1;
  int col_label = -1;
  bool header_seen = false;
  std::vector<std::string> problems;
  std::map<PairKey, std::pair<Label, std::size_t>> seen_rows;

  while (std::getline(labels, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) f = trim(f);
    if (!header_seen) {
      header_seen = true;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const std::string name = to_lower(fields[i]);
        const int idx = static_cast<int>(i);
        if (name == "tutorial_id") col_tutorial = idx;
        if (name == "fragment_id") col_fragment = idx;
        if (name == "api_fqn") col_api = idx;
        if (name == "label") col_label = idx;
      }
      if (col_tutorial < 0 || col_fragment < 0 || col_api < 0 || col_label < 0) {
        throw InputError(labels_file.string() +
                         ": header must name tutorial_id,fragment_id,api_fqn,label");
      }
      continue;
    }
    const auto width = static_cast<std::size_t>(std::max({col_tutorial, col_fragment, col_api, col_label})) + 1;
    const std::string where = labels_file.string() + ":" + std::to_string(line_no);
    if (fields.size() < width) {
      problems.push_back(where + ": expected " + std::to_string(width) + " fields");
      continue;
    }
    const std::string& tutorial_id = fields[static_cast<std::size_t>(col_tutorial)];
    const std::string& fragment_id = fields[static_cast<std::size_t>(col_fragment)];
    const auto label = parse_label(fields[static_cast<std::size_t>(col_label)]);
    if (!label) {
      problems.push_back(where + ": bad label '" + fields[static_cast<std::size_t>(col_label)] + "'");
      continue;
    }
    if (dataset.find_fragment(tutorial_id, fragment_id) == nullptr) {
      problems.push_back(where + ": no fragment " + tutorial_id + "/" + fragment_id);
      continue;
    }
    ApiName api;
    try {
      api = ApiName::parse(fields[static_cast<std::size_t>(col_api)]);
    } catch (const InputError& e) {
      problems.push_back(where + ": " + e.what());
      continue;
    }
    const PairKey key{api.fqn, tutorial_id, fragment_id};
    if (const auto it = seen_rows.find(key); it != seen_rows.end()) {
      if (it->second.first != *label) {
        problems.push_back(where + ": conflicting label for " + api.fqn + " in " + tutorial_id + "/" +
                           fragment_id + " (first given on line " + std::to_string(it->second.second) + ")");
      }
      continue;
    }
    seen_rows.emplace(key, std::make_pair(*label, line_no));
    if (const auto it = pair_index.find(key); it != pair_index.end()) {
      dataset.pairs[it->second].label = *label;
    } else {
      if (const ApiName* k = known.find(api.fqn)) api = *k;
      pair_index.emplace(key, dataset.pairs.size());
      dataset.pairs.push_back(ApiFragmentPair{api, tutorial_id, fragment_id, *label});
    }
  }

  if (!problems.empty()) {
    std::string message = "invalid label rows:";
    for (const auto& p : problems) message += "\n  " + p;
    throw InputError(message);
  }

  dataset.stats = dataset.compute_stats();
  return dataset;
}

}  // namespace apifrag
