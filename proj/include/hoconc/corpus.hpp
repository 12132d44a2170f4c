#pragma once

#include "hoconc/search.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hoconc {

enum class Expectation { Bug, NoBug };

/// Reads a `;; expect: bug` or `;; expect: no-bug` line.
std::optional<Expectation> read_expectation(std::string_view text);

struct CorpusEntry {
  std::filesystem::path file;
  std::string name;
  std::optional<Expectation> expect;
};

/// `.sexp` files of `dir`, sorted by name.
std::vector<CorpusEntry> load_corpus(const std::filesystem::path& dir);

struct CorpusResult {
  CorpusEntry entry;
  std::optional<Report> report;
  /// Parse or I/O problem; the program did not run.
  std::string error;
  bool met = false;
};

struct CorpusOptions {
  SearchConfig config;
  unsigned jobs = 1;
  /// When set, each program's JSONL trace goes to `<trace_dir>/<name>.jsonl`.
  std::optional<std::filesystem::path> trace_dir;
  /// Extra observer shared by every run; only used with jobs == 1.
  SearchObserver* observer = nullptr;
};

/// Runs every entry. Results keep the order of `entries`. Throws
/// SolverSpawnError.
std::vector<CorpusResult> run_corpus(const std::vector<CorpusEntry>& entries, const CorpusOptions& options);

/// One row per program (program, verdict, iterations, seconds, expectation
/// check); `timing` false prints `-` for seconds.
std::string format_summary(const std::vector<CorpusResult>& results, bool timing);

}  // namespace hoconc
