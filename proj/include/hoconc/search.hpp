#pragma once

#include "hoconc/concolic.hpp"
#include "hoconc/evolution.hpp"
#include "hoconc/smt.hpp"

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hoconc {

struct SearchConfig {
  std::size_t max_iterations = 10'000;
  std::chrono::milliseconds timeout{60'000};
  std::uint64_t fuel = kDefaultFuel;
  /// Longest path a run may log before it counts as out of fuel.
  std::size_t max_path = kDefaultMaxPath;
  std::size_t frontier_cap = 100'000;
  EvolvePolicy policy;
  /// Check each solver-backed candidate's predicted path against its run.
  bool verify_predictions = false;
  /// Report Stuck runs as bugs; by default only `error` counts.
  bool count_stuck_as_bug = false;
  SolverConfig solver = SolverConfig::from_env();
};

enum class Verdict { BugFound, Exhausted, BudgetExceeded };
std::string_view to_string(Verdict v);

struct SearchStats {
  std::uint64_t iterations = 0;
  std::uint64_t candidates = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t unsat = 0;
  std::uint64_t unknown = 0;
  std::uint64_t pruned = 0;
  std::uint64_t solver_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t predictions_checked = 0;
  std::uint64_t prediction_violations = 0;
  std::uint64_t properness_checks = 0;
  std::uint64_t properness_violations = 0;
  std::uint64_t model_checks = 0;
  std::uint64_t model_violations = 0;
  double seconds = 0;
};

struct BugReport {
  Store store;
  Bug bug;
  Path path;
  /// The trail of mutation rules that led to the store.
  std::vector<MutationRule> trail;
  /// Reified inputs re-run by the reference interpreter hit the same kind of bug.
  bool replay_confirmed = false;
  std::string replay_detail;
};

struct Report {
  Verdict verdict = Verdict::Exhausted;
  std::optional<BugReport> bug;
  SearchStats stats;
  /// Every mutation rule that produced an explored store.
  std::set<MutationRule> rules_used;
};

class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  /// One concolic run. `trail` is the rule sequence that produced `store`;
  /// `solver` is Sat for solver-backed stores and Unknown otherwise.
  virtual void on_run(std::uint64_t iteration, const Store& store, const ConcolicRun& run,
                      const std::vector<MutationRule>& trail, SatStatus solver) = 0;
  virtual void on_event(const std::string& kind, const std::string& detail) = 0;
  /// A candidate's query was decided.
  virtual void on_query(const Query&, const SatResult&) {}
};

/// Writes one JSON object per line for every run and event.
class JsonlTraceWriter : public SearchObserver {
 public:
  explicit JsonlTraceWriter(std::ostream& out) : out_(out) {}
  void on_run(std::uint64_t iteration, const Store& store, const ConcolicRun& run,
              const std::vector<MutationRule>& trail, SatStatus solver) override;
  void on_event(const std::string& kind, const std::string& detail) override;

 private:
  std::ostream& out_;
};

/// Accumulates the tree of explored decision paths; `write` emits Graphviz.
class DotPathTree : public SearchObserver {
 public:
  void on_run(std::uint64_t iteration, const Store& store, const ConcolicRun& run,
              const std::vector<MutationRule>& trail, SatStatus solver) override;
  void on_event(const std::string&, const std::string&) override {}
  void write(std::ostream& out) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::string label;
    std::map<std::string, std::size_t> children;
    std::string outcome;
  };
  std::vector<Node> nodes_{Node{"root", {}, {}}};
};

/// Fans events out to several observers.
class ObserverList : public SearchObserver {
 public:
  void add(SearchObserver* o) {
    if (o) list_.push_back(o);
  }
  void on_run(std::uint64_t iteration, const Store& store, const ConcolicRun& run,
              const std::vector<MutationRule>& trail, SatStatus solver) override {
    for (auto* o : list_) o->on_run(iteration, store, run, trail, solver);
  }
  void on_event(const std::string& kind, const std::string& detail) override {
    for (auto* o : list_) o->on_event(kind, detail);
  }
  void on_query(const Query& q, const SatResult& r) override {
    for (auto* o : list_) o->on_query(q, r);
  }

 private:
  std::vector<SearchObserver*> list_;
};

/// Breadth-first concolic search for an input that makes `program` fail.
/// Throws SolverSpawnError when the solver cannot be started; malformed
/// solver output drops the candidate.
Report run_search(const Program& program, const SearchConfig& config,
                  SearchObserver* observer = nullptr);

/// Re-runs reified bug inputs with the reference interpreter.
bool replay_bug(const Program& program, const Store& store, BugKind kind, std::uint64_t fuel,
                std::string* detail = nullptr);

}  // namespace hoconc
