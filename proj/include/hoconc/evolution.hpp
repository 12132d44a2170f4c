#pragma once

#include "hoconc/canonical.hpp"
#include "hoconc/path.hpp"
#include "hoconc/smt.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace hoconc {

enum class MutationRule {
  NegateLastTrue,
  NegateLastFalse,
  AddBranchProc,
  AddBranchEqOnElse,
  AddBranchEqMulti,
  RetargetBranch,
  TruncatePrefix,
};

inline constexpr MutationRule kAllRules[] = {
    MutationRule::NegateLastTrue,    MutationRule::NegateLastFalse, MutationRule::AddBranchProc,
    MutationRule::AddBranchEqOnElse, MutationRule::AddBranchEqMulti, MutationRule::RetargetBranch,
    MutationRule::TruncatePrefix,
};

std::string_view to_string(MutationRule r);

struct EvolvePolicy {
  std::size_t max_depth = 4;
  std::size_t max_clauses = 8;
  /// 0 gives fresh number variables the value 0.
  std::uint64_t seed = 0;
};

/// Initial value of the fresh number variable `name`.
Int fresh_value(std::uint64_t seed, const std::string& name);

/// The initial store: numbers bound to fresh values, functions to default_fn.
Store initial_store(const Program& p, const EvolvePolicy& policy);

struct Candidate {
  /// For solver-backed candidates, numbers still need the model applied.
  Store store;
  /// Expected path prefix of the run on the evolved store.
  Path predicted;
  MutationRule rule;
  /// `rule`, plus TruncatePrefix when the prefix is shorter than the path.
  std::vector<MutationRule> rules;
  std::optional<Query> query;
  std::size_t prefix_len = 0;
  std::vector<Label> touched;
};

struct EvolvedBody {
  BranchBody body;
  /// The input store extended with the body's fresh bindings and counters.
  Store store;
};

/// Bodies for a new clause at a dispatch with scope `scope`: a fresh number
/// variable, a default function, each variable in scope, then a call of
/// each procedure in scope on a fresh number or on each variable in scope.
/// Bodies that would nest deeper than the policy allows are left out.
std::vector<EvolvedBody> evolve_bodies(const Store& store, const DispatchScope& scope,
                                       const EvolvePolicy& policy);

/// Every mutation of `store` suggested by `path`, shortest prefix first.
std::vector<Candidate> enumerate_mutations(const Store& store, const Path& path,
                                           const EvolvePolicy& policy);

/// Same decisions (FirstOrderC and BranchC subsequences).
bool paths_equivalent(const Path& a, const Path& b);

/// The decisions of `predicted` are a prefix of those of `actual`.
bool verify_prediction(const Path& predicted, const Path& actual);

}  // namespace hoconc
