// Acceptance checks. Prints one PASS/FAIL line per criterion; exits nonzero
// when any fails.

#include "hoconc/cli.hpp"
#include "hoconc/corpus.hpp"
#include "hoconc/search.hpp"
#include "oracle.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace hoconc;
namespace fs = std::filesystem;

namespace {

constexpr std::size_t kMaxBugIterations = 5'000;
constexpr double kMaxSecondsPerProgram = 60.0;
constexpr std::size_t kMinBugFixtures = 10;
constexpr std::size_t kRandomPrograms = 120;
constexpr std::size_t kMinSatPairs = 1'000;
constexpr int kSeeds = 16;

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
  std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!ok) ++failures;
}

/// Keeps every (store, path) pair seen during a search.
struct PairCollector : SearchObserver {
  std::vector<std::pair<Store, Path>> pairs;
  void on_run(std::uint64_t, const Store& store, const ConcolicRun& run, const std::vector<MutationRule>&,
              SatStatus) override {
    pairs.emplace_back(store, run.path);
  }
  void on_event(const std::string&, const std::string&) override {}
};

/// Independent soundness check: the reified inputs raise `error` in the
/// substitution evaluator.
bool oracle_confirms(const Program& p, const BugReport& b) {
  oracle::Result r = oracle::evaluate(p, reify_all(b.store), 2'000'000);
  return b.bug.kind == BugKind::ExplicitError ? r.kind == oracle::Result::Error : r.kind == oracle::Result::Stuck;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Soundness {
  std::size_t bugs = 0;
  std::size_t confirmed = 0;
  std::vector<std::string> unconfirmed;

  void add(const std::string& name, const Program& p, const Report& r) {
    if (!r.bug) return;
    ++bugs;
    if (r.bug->replay_confirmed && r.bug->bug.kind == BugKind::ExplicitError && oracle_confirms(p, *r.bug)) {
      ++confirmed;
    } else {
      unconfirmed.push_back(name);
    }
  }
};

struct Totals {
  std::uint64_t predictions_checked = 0;
  std::uint64_t prediction_violations = 0;
  std::uint64_t properness_checks = 0;
  std::uint64_t properness_violations = 0;

  void add(const SearchStats& s) {
    predictions_checked += s.predictions_checked;
    prediction_violations += s.prediction_violations;
    properness_checks += s.properness_checks;
    properness_violations += s.properness_violations;
  }
};

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ", ") + x;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: hoconc_acceptance FIXTURE_DIR\n";
    return 2;
  }
  const fs::path dir = argv[1];
  const auto entries = load_corpus(dir);

  Soundness soundness;
  Totals totals;
  PairCollector pairs;

  // Corpus bug-finding, with prediction checks and pair collection on.
  {
    CorpusOptions opts;
    opts.config.verify_predictions = true;
    opts.observer = &pairs;
    std::vector<CorpusResult> results;
    try {
      results = run_corpus(entries, opts);
    } catch (const std::exception& e) {
      report(false, "corpus-bug-finding", std::string("solver unavailable: ") + e.what());
      return 1;
    }

    std::size_t bug_fixtures = 0;
    std::set<MutationRule> tags;
    std::vector<std::string> problems;
    bool running = false, call_sites = false;
    double total = 0;
    std::uint64_t worst_iters = 0;
    for (const auto& r : results) {
      if (!r.report) {
        problems.push_back(r.entry.name + " (" + r.error + ")");
        continue;
      }
      const Report& rep = *r.report;
      total += rep.stats.seconds;
      totals.add(rep.stats);
      soundness.add(r.entry.name, parse_program(read_text(r.entry.file)), rep);
      if (rep.stats.seconds > kMaxSecondsPerProgram) problems.push_back(r.entry.name + " (too slow)");
      if (r.entry.expect == Expectation::Bug) {
        ++bug_fixtures;
        if (rep.verdict != Verdict::BugFound || rep.stats.iterations > kMaxBugIterations) {
          problems.push_back(r.entry.name + " (" + std::string(to_string(rep.verdict)) + ")");
          continue;
        }
        worst_iters = std::max(worst_iters, rep.stats.iterations);
        for (auto t : rep.bug->trail) tags.insert(t);
        running |= r.entry.name == "running-example";
        call_sites |= r.entry.name == "call-sites";
      } else if (r.entry.expect == Expectation::NoBug) {
        if (rep.verdict == Verdict::BugFound) problems.push_back(r.entry.name + " (unexpected bug)");
      } else {
        problems.push_back(r.entry.name + " (no expectation)");
      }
    }
    std::vector<std::string> missing;
    for (auto t : kAllRules) {
      if (!tags.count(t)) missing.push_back(std::string(to_string(t)));
    }
    if (bug_fixtures < kMinBugFixtures) problems.push_back("only " + std::to_string(bug_fixtures) + " bug fixtures");
    if (!missing.empty()) problems.push_back("rules never used: " + join(missing));
    if (!running) problems.push_back("running-example missing");
    if (!call_sites) problems.push_back("call-sites missing");
    std::ostringstream d;
    d << bug_fixtures << " bug fixtures, " << results.size() - bug_fixtures << " no-bug fixtures, "
      << tags.size() << "/" << std::size(kAllRules) << " rules, max " << worst_iters << " iterations, " << total
      << " s total";
    if (!problems.empty()) d << "; problems: " << join(problems);
    report(problems.empty(), "corpus-bug-finding", d.str());
  }

  // Random programs for the soundness and properness criteria.
  std::size_t random_bugs = 0;
  {
    std::mt19937_64 rng(2024);
    SearchConfig c;
    c.max_iterations = 300;
    c.timeout = std::chrono::milliseconds(5'000);
    for (std::size_t i = 0; i < kRandomPrograms; ++i) {
      std::string text = oracle::random_program_text(rng);
      Program p = parse_program(text);
      Report r = run_search(p, c);
      totals.add(r.stats);
      std::size_t before = soundness.bugs;
      soundness.add("random#" + std::to_string(i), p, r);
      random_bugs += soundness.bugs - before;
    }
    std::ostringstream d;
    d << soundness.confirmed << "/" << soundness.bugs << " bug reports replayed (" << random_bugs << " from "
      << kRandomPrograms << " random programs)";
    if (!soundness.unconfirmed.empty()) d << "; unconfirmed: " << join(soundness.unconfirmed);
    report(soundness.unconfirmed.empty() && soundness.bugs > 0, "soundness", d.str());
  }

  {
    std::ostringstream d;
    d << totals.predictions_checked << " predictions checked, " << totals.prediction_violations << " violated";
    report(totals.prediction_violations == 0 && totals.predictions_checked > 0, "concolic-prediction", d.str());
  }

  // Encoder oracle over (store, path) pairs from corpus runs under several seeds.
  {
    for (int seed = 1; seed < kSeeds; ++seed) {
      CorpusOptions opts;
      opts.config.policy.seed = static_cast<std::uint64_t>(seed);
      opts.observer = &pairs;
      run_corpus(entries, opts);
    }
    Solver solver;
    std::set<std::string> seen_pairs;
    std::size_t pairs_checked = 0, models = 0, violations = 0, unsat = 0;
    for (const auto& [store, path] : pairs.pairs) {
      if (!seen_pairs.insert(fingerprint(store) + "|" + print_path(path)).second) continue;
      bool any = false;
      for (const auto& cand : enumerate_mutations(store, path, {})) {
        if (!cand.query || cand.query->ground()) continue;
        SatResult r = solver.solve(*cand.query);
        if (r.status != SatStatus::Sat) {
          unsat += r.status == SatStatus::Unsat;
          continue;
        }
        any = true;
        ++models;
        for (const auto& a : cand.query->assertions) {
          if ((oracle::eval_trace(a.trace, r.model) != 0) != a.truthy) {
            ++violations;
            break;
          }
        }
      }
      pairs_checked += any;
    }
    std::ostringstream d;
    d << pairs_checked << " distinct (store, path) pairs with sat models, " << models << " models re-checked ("
      << solver.stats().solver_calls << " distinct queries), " << violations << " violations, " << unsat << " unsat";
    report(violations == 0 && pairs_checked >= kMinSatPairs, "encoder-oracle", d.str());
  }

  {
    std::ostringstream d;
    d << totals.properness_checks << " stores checked, " << totals.properness_violations << " improper";
    report(totals.properness_violations == 0 && totals.properness_checks > 0, "properness-closure", d.str());
  }

  // Determinism of the corpus command, summary and traces.
  {
    fs::path base = fs::temp_directory_path() / ("hoconc-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(base);
    std::string outs[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      std::string traces = (base / std::to_string(k)).string();
      fs::create_directories(traces);
      const std::string d = dir.string();
      const char* args[] = {"hoconc", "corpus", d.c_str(), "--no-timing", "--trace-dir", traces.c_str()};
      std::ostringstream out, err;
      codes[k] = run_cli(6, args, out, err);
      outs[k] = out.str();
    }
    std::size_t files = 0;
    std::vector<std::string> differing;
    for (const auto& e : fs::directory_iterator(base / "0")) {
      ++files;
      fs::path other = base / "1" / e.path().filename();
      if (!fs::exists(other) || read_text(e.path()) != read_text(other)) {
        differing.push_back(e.path().filename().string());
      }
    }
    bool ok = outs[0] == outs[1] && differing.empty() && files == entries.size() && codes[0] == codes[1];
    std::ostringstream d;
    d << "summaries " << (outs[0] == outs[1] ? "identical" : "differ") << ", " << files - differing.size() << "/"
      << files << " traces identical";
    report(ok, "determinism", d.str());
    fs::remove_all(base);
  }

  // Micro-walkthrough on negate-simple.
  {
    struct First : SearchObserver {
      std::vector<std::string> paths;
      void on_run(std::uint64_t, const Store&, const ConcolicRun& run, const std::vector<MutationRule>&,
                  SatStatus) override {
        paths.push_back(print_path(run.path));
      }
      void on_event(const std::string&, const std::string&) override {}
    } first;
    Report r = run_search(parse_program(read_text(dir / "negate-simple.sexp")), {}, &first);
    const std::string want = "[(fo 0 (= x 3))]";
    bool ok = !first.paths.empty() && first.paths[0] == want && r.verdict == Verdict::BugFound &&
              r.stats.iterations <= 3 && r.bug && r.bug->store.number("x") && *r.bug->store.number("x") == 3;
    std::ostringstream d;
    d << "first path " << (first.paths.empty() ? "(none)" : first.paths[0]) << ", " << to_string(r.verdict)
      << " after " << r.stats.iterations << " iterations";
    if (r.bug && r.bug->store.number("x")) d << " with x = " << *r.bug->store.number("x");
    report(ok, "micro-walkthrough", d.str());
  }

  std::cout << (failures ? std::to_string(failures) + " criteria failed" : "all criteria passed") << std::endl;
  return failures ? 1 : 0;
}
