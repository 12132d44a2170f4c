#include "hoconc/cli.hpp"

#include "hoconc/corpus.hpp"
#include "hoconc/search.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hoconc {

namespace {

struct Flags {
  std::string solver;
  std::size_t max_iters = 10'000;
  double timeout = 60;
  std::uint64_t fuel = kDefaultFuel;
  std::size_t max_path = kDefaultMaxPath;
  std::uint64_t seed = 0;
  std::size_t frontier_cap = 100'000;
  bool verify_predictions = false;
  bool count_stuck_as_bug = false;
  bool no_timing = false;

  SearchConfig config() const {
    SearchConfig c;
    c.max_iterations = max_iters;
    c.timeout = std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
    c.fuel = fuel;
    c.max_path = max_path;
    c.frontier_cap = frontier_cap;
    c.policy.seed = seed;
    c.verify_predictions = verify_predictions;
    c.count_stuck_as_bug = count_stuck_as_bug;
    if (!solver.empty()) c.solver.path = solver;
    return c;
  }
};

void add_search_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--solver", f.solver, "SMT solver executable (default: $HOCONC_SOLVER or z3)");
  cmd.add_option("--max-iters", f.max_iters, "Iteration budget")->check(CLI::PositiveNumber);
  cmd.add_option("--timeout", f.timeout, "Wall-clock budget per program, seconds")->check(CLI::PositiveNumber);
  cmd.add_option("--fuel", f.fuel, "Evaluation steps per run")->check(CLI::PositiveNumber);
  cmd.add_option("--max-path", f.max_path, "Path constraints per run before it counts as out of fuel")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--seed", f.seed, "Seed for fresh number values (0: all zero)");
  cmd.add_option("--frontier-cap", f.frontier_cap, "Maximum queued candidates")->check(CLI::PositiveNumber);
  cmd.add_flag("--verify-predictions", f.verify_predictions, "Check predicted paths of solver-backed candidates");
  cmd.add_flag("--count-stuck-as-bug", f.count_stuck_as_bug, "Report stuck runs as bugs");
  cmd.add_flag("--no-timing", f.no_timing, "Omit wall-clock times from the output");
}

std::string rules_text(const std::vector<MutationRule>& trail) {
  if (trail.empty()) return "(initial input)";
  std::string out;
  for (auto r : trail) {
    if (!out.empty()) out += " ";
    out += to_string(r);
  }
  return out;
}

void print_report(const Program& program, const Report& report, bool timing, std::ostream& out) {
  const SearchStats& s = report.stats;
  out << "verdict: " << to_string(report.verdict) << "\n";
  out << "iterations: " << s.iterations << "\n";
  if (report.bug) {
    const BugReport& b = *report.bug;
    out << "bug: " << to_string(b.bug.kind) << " at " << to_string(b.bug.at);
    if (!b.bug.detail.empty() && b.bug.kind == BugKind::Stuck) out << " (" << b.bug.detail << ")";
    out << "\n";
    out << "rules: " << rules_text(b.trail) << "\n";
    out << "inputs:\n";
    std::vector<std::string> names;
    for (const auto& in : program.inputs) names.push_back(in.name);
    out << print_store(b.store, names);
    out << "replay: " << (b.replay_confirmed ? "confirmed" : "NOT confirmed (" + b.replay_detail + ")") << "\n";
  }
  out << "solver calls: " << s.solver_calls << ", cache hits: " << s.cache_hits << ", unsat: " << s.unsat
      << ", unknown: " << s.unknown << "\n";
  if (s.predictions_checked) {
    out << "predictions checked: " << s.predictions_checked << ", violated: " << s.prediction_violations << "\n";
  }
  if (timing) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", s.seconds);
    out << "seconds: " << buf << "\n";
  }
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_test(const std::string& file, const Flags& flags, const std::string& trace_path,
             const std::string& dot_path, std::ostream& out, std::ostream& err) {
  auto text = read_file(file);
  if (!text) {
    err << "hoconc: cannot read " << file << "\n";
    return kExitUsage;
  }
  Program program;
  try {
    program = parse_program(*text);
  } catch (const Error& e) {
    err << file << ": " << e.what() << "\n";
    return kExitUsage;
  }
  ObserverList observers;
  std::ofstream trace;
  std::optional<JsonlTraceWriter> writer;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) {
      err << "hoconc: cannot write " << trace_path << "\n";
      return kExitEnvironment;
    }
    writer.emplace(trace);
    observers.add(&*writer);
  }
  DotPathTree tree;
  if (!dot_path.empty()) observers.add(&tree);

  Report report = run_search(program, flags.config(), &observers);
  print_report(program, report, !flags.no_timing, out);
  if (!dot_path.empty()) {
    std::ofstream dot(dot_path);
    if (!dot) {
      err << "hoconc: cannot write " << dot_path << "\n";
      return kExitEnvironment;
    }
    tree.write(dot);
  }
  return report.verdict == Verdict::BugFound ? kExitBug : kExitNoBug;
}

int cmd_corpus(const std::string& dir, const Flags& flags, unsigned jobs, const std::string& trace_dir,
               std::ostream& out, std::ostream& err) {
  std::vector<CorpusEntry> entries;
  try {
    entries = load_corpus(dir);
  } catch (const std::exception& e) {
    err << "hoconc: " << e.what() << "\n";
    return kExitUsage;
  }
  CorpusOptions options;
  options.config = flags.config();
  options.jobs = jobs;
  if (!trace_dir.empty()) options.trace_dir = trace_dir;
  auto results = run_corpus(entries, options);
  out << format_summary(results, !flags.no_timing);
  for (const auto& r : results) {
    if (!r.met) return kExitBug;
  }
  return kExitNoBug;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Concolic tester for higher-order programs", "hoconc"};
  app.require_subcommand(1);
  Flags flags;

  std::string file, trace_path, dot_path;
  auto* test = app.add_subcommand("test", "Search for inputs that make a program fail");
  test->add_option("file", file, "Program file")->required();
  test->add_option("--trace", trace_path, "Write a JSONL record per run");
  test->add_option("--dot", dot_path, "Write the explored path tree as Graphviz");
  add_search_flags(*test, flags);

  std::string dir, trace_dir;
  unsigned jobs = 1;
  auto* corpus = app.add_subcommand("corpus", "Run every annotated program of a directory");
  corpus->add_option("dir", dir, "Corpus directory")->required();
  corpus->add_option("--jobs", jobs, "Programs run concurrently")->check(CLI::PositiveNumber);
  corpus->add_option("--trace-dir", trace_dir, "Write one JSONL trace per program here");
  add_search_flags(*corpus, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*test) return cmd_test(file, flags, trace_path, dot_path, out, err);
    return cmd_corpus(dir, flags, jobs, trace_dir, out, err);
  } catch (const SolverSpawnError& e) {
    err << "hoconc: " << e.what() << "\n";
    return kExitEnvironment;
  } catch (const std::exception& e) {
    err << "hoconc: " << e.what() << "\n";
    return kExitEnvironment;
  }
}

}  // namespace hoconc
