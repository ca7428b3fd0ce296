#pragma once

#include <cstdint>
#include <filesystem>

namespace apifrag::synthetic {

struct CorpusOptions {
  std::uint64_t seed = 20180501;
  int tutorials = 4;
  /// Labeled pairs per tutorial.
  int pairs_per_tutorial = 50;
};

/// Writes a small API-tutorial corpus for a fictional `org.acme` library:
/// `tutorials/*.html`, `labels.csv`, `known_apis.txt`, `qa.jsonl` and
/// `spec.json`. Each fragment explains one API (the Relevant pair) and uses
/// others (Irrelevant pairs). Some explained APIs are only mentioned in
/// passing and some used APIs are mentioned prominently, so name-based
/// signals alone are ambiguous; the explained API's methods and vocabulary
/// always dominate. Output is a pure function of the options.
void write_corpus(const std::filesystem::path& out_dir, const CorpusOptions& options = {});

}  // namespace apifrag::synthetic
