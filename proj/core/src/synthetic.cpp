#include "apifrag/synthetic.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "apifrag/util.hpp"

namespace apifrag::synthetic {
namespace {

struct ApiSpec {
  const char* fqn;
  const char* simple;
  std::array<const char*, 5> vocab;
  std::array<const char*, 3> methods;
};

// clang-format off
const std::array<ApiSpec, 16> kApis = {{
    {"org.acme.ui.ColorPicker", "ColorPicker", {"color", "hue", "palette", "shade", "swatch"}, {"pickColor", "setPalette", "getHue"}},
    {"org.acme.ui.WidgetPanel", "WidgetPanel", {"panel", "layout", "widget", "border", "region"}, {"addWidget", "setLayout", "repaintRegion"}},
    {"org.acme.io.FileCache", "FileCache", {"cache", "disk", "eviction", "entry", "capacity"}, {"putEntry", "evictStale", "loadFile"}},
    {"org.acme.io.StreamReader", "StreamReader", {"stream", "byte", "buffer", "charset", "line"}, {"readLine", "skipBytes", "setCharset"}},
    {"org.acme.net.HttpClient", "HttpClient", {"request", "response", "header", "server", "timeout"}, {"sendRequest", "setTimeout", "addHeader"}},
    {"org.acme.net.SocketPool", "SocketPool", {"socket", "connection", "pool", "port", "lease"}, {"leaseSocket", "releaseSocket", "resizePool"}},
    {"org.acme.event.EventBus", "EventBus", {"event", "listener", "publisher", "subscriber", "topic"}, {"publishEvent", "subscribeListener", "dropListener"}},
    {"org.acme.event.TimerTask", "TimerTask", {"timer", "schedule", "delay", "interval", "tick"}, {"scheduleAt", "cancelTimer", "setInterval"}},
    {"org.acme.data.JsonParser", "JsonParser", {"json", "token", "document", "array", "field"}, {"parseObject", "nextToken", "readField"}},
    {"org.acme.data.TableModel", "TableModel", {"table", "row", "column", "cell", "grid"}, {"insertRow", "removeColumn", "getCell"}},
    {"org.acme.data.QueryBuilder", "QueryBuilder", {"query", "clause", "filter", "predicate", "projection"}, {"whereClause", "orderBy", "buildQuery"}},
    {"org.acme.math.MatrixSolver", "MatrixSolver", {"matrix", "vector", "pivot", "equation", "determinant"}, {"solveSystem", "invertMatrix", "luDecompose"}},
    {"org.acme.math.RandomSampler", "RandomSampler", {"random", "sample", "seed", "distribution", "draw"}, {"drawSample", "setSeed", "shuffleItems"}},
    {"org.acme.text.SpellChecker", "SpellChecker", {"spelling", "dictionary", "suggestion", "typo", "locale"}, {"checkWord", "addToDictionary", "suggestFix"}},
    {"org.acme.text.TemplateEngine", "TemplateEngine", {"template", "placeholder", "render", "variable", "markup"}, {"renderTemplate", "bindVariable", "compileTemplate"}},
    {"org.acme.log.AuditLogger", "AuditLogger", {"audit", "record", "severity", "trail", "compliance"}, {"logRecord", "flushTrail", "setSeverity"}},
}};
// clang-format on

const std::array<const char*, 12> kGeneric = {"application", "project", "example", "configuration", "step",
                                              "value",       "result",  "method",  "section",       "object",
                                              "instance",    "setting"};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Portable: no standard distributions.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }
  template <typename C>
  const auto& pick(const C& c) {
    return c[below(c.size())];
  }

 private:
  std::mt19937_64 engine_;
};

std::string doc_link(const ApiSpec& api) {
  std::string path = api.fqn;
  for (auto& c : path) {
    if (c == '.') c = '/';
  }
  return "https://docs.acme.org/api/" + path + ".html";
}

std::string mention(const ApiSpec& api, Rng& rng) {
  if (rng.chance(0.3)) return "<a href=\"" + doc_link(api) + "\">" + api.simple + "</a>";
  if (rng.chance(0.2)) return std::string("<code>") + api.simple + "</code>";
  return api.simple;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct FragmentPlan {
  std::size_t focal = 0;
  bool focal_strong = true;
  std::vector<std::size_t> others;
  std::vector<bool> other_strong;
};

// Sentences about the explained API: its vocabulary and methods.
std::string focal_paragraph(const ApiSpec& x, bool strong, Rng& rng) {
  std::ostringstream p;
  const auto v = [&] { return std::string(rng.pick(x.vocab)); };
  if (strong) {
    p << mention(x, rng) << " " << rng.pick(std::array{"provides", "manages", "represents", "handles"}) << " the "
      << v() << " and the " << v() << " of the " << rng.pick(kGeneric) << ". ";
  } else {
    p << "This " << rng.pick(std::array{"section", "part", "page"}) << " looks at the " << v() << " and how each "
      << v() << " relates to the " << rng.pick(kGeneric) << ". ";
  }
  const std::size_t body = 3 + rng.below(3);
  for (std::size_t i = 0; i < body; ++i) {
    switch (rng.below(4)) {
      case 0:
        p << "Call " << rng.pick(x.methods) << "() to update the " << v() << " before the " << v()
          << " is used. ";
        break;
      case 1:
        p << "The " << v() << " depends on the " << v() << ", so check the " << v() << " first. ";
        break;
      case 2:
        p << "A typical " << v() << " keeps one " << v() << " per " << rng.pick(kGeneric) << ". ";
        break;
      default:
        p << "Use " << rng.pick(x.methods) << "() when the " << v() << " changes. ";
        break;
    }
  }
  if (!strong) p << "All of this is done through " << mention(x, rng) << ". ";
  return p.str();
}

// Sentences that use another API without explaining it.
std::string other_sentences(const ApiSpec& y, const ApiSpec& x, bool strong, Rng& rng) {
  std::ostringstream p;
  const auto vy = [&] { return std::string(rng.pick(y.vocab)); };
  const auto vx = [&] { return std::string(rng.pick(x.vocab)); };
  if (strong) {
    p << mention(y, rng) << " " << rng.pick(std::array{"provides", "holds", "creates", "supports"}) << " the "
      << vy() << " for the " << vx() << ". ";
    p << "For example, " << mention(y, rng) << " can be passed in when the " << vx() << " is ready. ";
    if (rng.chance(0.5)) p << mention(y, rng) << " is created once per " << rng.pick(kGeneric) << ". ";
  } else {
    p << "The " << vx() << " can also be shared with " << mention(y, rng) << " if needed. ";
  }
  return p.str();
}

std::string code_block(const ApiSpec& x, bool focal_strong, const std::vector<const ApiSpec*>& others,
                       const std::vector<bool>& other_strong, Rng& rng) {
  std::ostringstream c;
  const std::string var = "main" + std::string(x.simple);
  if (focal_strong) {
    c << x.simple << " " << var << " = new " << x.simple << "();\n";
  } else {
    c << "var " << var << " = context.lookup(\"" << x.vocab[0] << "\");\n";
  }
  for (std::size_t i = 0; i < others.size(); ++i) {
    if (other_strong[i] || rng.chance(0.3)) {
      c << others[i]->simple << " helper" << i << " = new " << others[i]->simple << "();\n";
      c << var << "." << rng.pick(x.methods) << "(helper" << i << ");\n";
    }
  }
  const std::size_t calls = 1 + rng.below(3);
  for (std::size_t i = 0; i < calls; ++i) c << var << "." << rng.pick(x.methods) << "();\n";
  return c.str();
}

std::string html_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == '<') out += "&lt;";
    else if (ch == '>') out += "&gt;";
    else if (ch == '&') out += "&amp;";
    else out.push_back(ch);
  }
  return out;
}

}  // namespace

void write_corpus(const std::filesystem::path& out_dir, const CorpusOptions& options) {
  namespace fs = std::filesystem;
  Rng rng(options.seed);
  fs::create_directories(out_dir / "tutorials");

  std::ostringstream known;
  for (const auto& api : kApis) known << api.fqn << "\n";
  write_file(out_dir / "known_apis.txt", known.str());

  std::ostringstream labels;
  labels << "tutorial_id,fragment_id,api_fqn,label\n";

  for (int t = 0; t < options.tutorials; ++t) {
    const std::string tutorial_id = "tutorial" + std::to_string(t + 1);
    std::ostringstream html;
    html << "<!DOCTYPE html>\n<html>\n<head><title>Acme Guide " << (t + 1) << "</title></head>\n<body>\n";
    html << "<h1>Acme Guide " << (t + 1) << "</h1>\n";
    int remaining = options.pairs_per_tutorial;
    int fragment = 0;
    int section = 0;
    while (remaining > 0) {
      if (fragment % 4 == 0) {
        ++section;
        html << "<h2>Part " << section << "</h2>\n";
      }
      ++fragment;
      FragmentPlan plan;
      plan.focal = rng.below(kApis.size());
      plan.focal_strong = rng.chance(0.6);
      const int max_others = std::min(remaining - 1, 3);
      const std::size_t n_others = max_others <= 0 ? 0 : 1 + rng.below(static_cast<std::size_t>(max_others));
      while (plan.others.size() < n_others) {
        const std::size_t o = rng.below(kApis.size());
        if (o == plan.focal || std::find(plan.others.begin(), plan.others.end(), o) != plan.others.end()) continue;
        plan.others.push_back(o);
        plan.other_strong.push_back(rng.chance(0.4));
      }
      remaining -= static_cast<int>(1 + plan.others.size());

      const ApiSpec& x = kApis[plan.focal];
      std::string title = capitalize(rng.pick(x.vocab)) + " and " + rng.pick(x.vocab);
      if (rng.chance(0.4)) title = std::string("Using ") + rng.pick(x.methods);
      html << "<h3>" << title << "</h3>\n";

      std::vector<const ApiSpec*> others;
      for (auto o : plan.others) others.push_back(&kApis[o]);

      html << "<p>" << focal_paragraph(x, plan.focal_strong, rng) << "</p>\n";
      std::ostringstream second;
      for (std::size_t i = 0; i < others.size(); ++i) {
        second << other_sentences(*others[i], x, plan.other_strong[i], rng);
      }
      if (!second.str().empty()) html << "<p>" << second.str() << "</p>\n";
      if (rng.chance(0.8)) {
        html << "<pre class=\"prettyprint\">" << html_escape(code_block(x, plan.focal_strong, others, plan.other_strong, rng))
             << "</pre>\n";
      }
      html << "<p>The " << rng.pick(kGeneric) << " now uses the " << rng.pick(x.vocab) << " as expected.</p>\n";

      const std::string fragment_id = "f" + std::to_string(section + fragment + 1);
      labels << tutorial_id << "," << fragment_id << "," << x.fqn << ",relevant\n";
      for (auto* o : others) labels << tutorial_id << "," << fragment_id << "," << o->fqn << ",irrelevant\n";
    }
    html << "</body>\n</html>\n";
    write_file(out_dir / "tutorials" / (tutorial_id + ".html"), html.str());
  }
  write_file(out_dir / "labels.csv", labels.str());

  nlohmann::ordered_json spec = nlohmann::ordered_json::array();
  for (const auto& api : kApis) {
    std::ostringstream d;
    d << "The " << api.simple << " class manages the " << api.vocab[0] << " and its " << api.vocab[1] << ". It keeps the "
      << api.vocab[2] << " and the " << api.vocab[3] << " consistent with the " << api.vocab[4] << ".";
    spec.push_back({{"fqn", api.fqn},
                    {"description", d.str()},
                    {"methods", {api.methods[0], api.methods[1], api.methods[2]}}});
  }
  write_file(out_dir / "spec.json", spec.dump(2) + "\n");

  std::ostringstream qa;
  int doc = 0;
  for (const auto& api : kApis) {
    for (int k = 0; k < 3; ++k) {
      nlohmann::ordered_json record;
      record["id"] = "q" + std::to_string(++doc);
      record["question_title"] = std::string("How do I ") + rng.pick(std::array{"update", "reset", "share", "read"}) +
                                 " the " + rng.pick(api.vocab) + " with " + api.simple + "?";
      record["question_body"] = std::string("<p>My ") + rng.pick(api.vocab) + " is wrong after I change the " +
                                rng.pick(api.vocab) + ". I use <code>" + api.fqn + "</code>.</p>";
      record["answer_body"] = std::string("<p>Call <code>") + rng.pick(api.methods) + "()</code> first. The " +
                              api.vocab[0] + " and the " + api.vocab[1] + " are cached, so the " + api.vocab[2] +
                              " and " + api.vocab[3] + " need a refresh.</p>";
      record["question_score"] = static_cast<int>(rng.below(40)) - 5;
      record["answer_score"] = static_cast<int>(rng.below(60));
      qa << record.dump() << "\n";
    }
  }
  for (int k = 0; k < 8; ++k) {
    nlohmann::ordered_json record;
    record["id"] = "q" + std::to_string(++doc);
    record["question_title"] = std::string("Why does my ") + rng.pick(kGeneric) + " fail to build?";
    record["question_body"] = std::string("<p>The ") + rng.pick(kGeneric) + " reports an error in the " +
                              rng.pick(kGeneric) + ".</p>";
    record["answer_body"] = std::string("<p>Clean the ") + rng.pick(kGeneric) + " and rebuild.</p>";
    record["question_score"] = static_cast<int>(rng.below(100));
    record["answer_score"] = static_cast<int>(rng.below(100));
    qa << record.dump() << "\n";
  }
  write_file(out_dir / "qa.jsonl", qa.str());
}

}  // namespace apifrag::synthetic
