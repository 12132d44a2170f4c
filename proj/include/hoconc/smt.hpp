#pragma once

#include "hoconc/canonical.hpp"
#include "hoconc/trace.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hoconc {

/// `trace` is nonzero (truthy) or zero (falsy).
struct Assertion {
  Trace trace;
  bool truthy = true;
};

/// A conjunction of assertions over integer variables. `vars` lists every
/// variable in first-occurrence order.
struct Query {
  std::vector<std::string> vars;
  std::vector<Assertion> assertions;

  void add(Trace trace, bool truthy);
  bool ground() const { return vars.empty(); }
};

/// Assertions for every decision (FirstOrderC, BranchC) of `path`, plus
/// pairwise distinctness of the equality tests of each dispatch in `store`.
Query build_query(const Path& path, const Store& store);

/// QF_NIA script that checks the query and asks for the values of all its
/// variables. Variables are renamed to `v<i>` by position in `vars`.
std::string to_smtlib(const Query& q);

/// Evaluates every assertion of `q` under `model`. Unbound variables make
/// it false.
bool model_satisfies(const Query& q, const NumberEnv& model);

enum class SatStatus { Sat, Unsat, Unknown };
std::string_view to_string(SatStatus s);

struct SatResult {
  SatStatus status = SatStatus::Unknown;
  NumberEnv model;
};

struct SolverConfig {
  std::string path = "z3";
  std::vector<std::string> args{"-in", "-smt2"};
  std::chrono::milliseconds timeout{10'000};

  /// Defaults, with HOCONC_SOLVER overriding `path` when set.
  static SolverConfig from_env();
};

class SolverSpawnError : public Error {
 public:
  using Error::Error;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Runs the solver once on `script`. Returns its standard output, or
/// nullopt when the timeout expired (the process is killed).
std::optional<std::string> run_solver_process(const SolverConfig& config, const std::string& script);

/// Parses `sat`/`unsat`/`unknown` followed by a get-value response for
/// `var_count` variables named `v<i>`.
SatResult parse_solver_output(const std::string& output, std::size_t var_count,
                              const std::vector<std::string>& names);

struct SolverStats {
  std::uint64_t queries = 0;
  std::uint64_t solver_calls = 0;
  std::uint64_t cache_hits = 0;
  std::uint64_t ground = 0;
};

/// Front end to an external SMT-LIB solver, with a result cache keyed on the
/// script text. Ground queries are decided without a process.
class Solver {
 public:
  explicit Solver(SolverConfig config = SolverConfig::from_env()) : config_(std::move(config)) {}

  SatResult solve(const Query& q);
  const SolverStats& stats() const { return stats_; }
  const SolverConfig& config() const { return config_; }

 private:
  SolverConfig config_;
  SolverStats stats_;
  std::map<std::string, SatResult> cache_;
};

class ImproperResult : public Error {
 public:
  using Error::Error;
};

/// Rebinds the store's numbers to the model's values. Throws ImproperResult
/// when the updated store is not proper.
Store apply_model(const Store& store, const NumberEnv& model);

}  // namespace hoconc
