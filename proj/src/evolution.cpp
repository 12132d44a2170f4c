#include "hoconc/evolution.hpp"

#include <algorithm>

namespace hoconc {

std::string_view to_string(MutationRule r) {
  switch (r) {
    case MutationRule::NegateLastTrue: return "negate-last-true";
    case MutationRule::NegateLastFalse: return "negate-last-false";
    case MutationRule::AddBranchProc: return "add-branch-proc";
    case MutationRule::AddBranchEqOnElse: return "add-branch-eq-on-else";
    case MutationRule::AddBranchEqMulti: return "add-branch-eq-multi";
    case MutationRule::RetargetBranch: return "retarget-branch";
    case MutationRule::TruncatePrefix: return "truncate-prefix";
  }
  return "?";
}

Int fresh_value(std::uint64_t seed, const std::string& name) {
  if (seed == 0) return 0;
  // FNV-1a over the seed bytes and the name.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](unsigned char b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  for (char c : name) mix(static_cast<unsigned char>(c));
  return Int(static_cast<long long>(h % 21)) - 10;
}

Store initial_store(const Program& p, const EvolvePolicy& policy) {
  Store s;
  for (const auto& in : p.inputs) {
    if (in.sort == Sort::Number) {
      s.bindings.emplace(in.name, fresh_value(policy.seed, in.name));
    } else {
      s.bindings.emplace(in.name, default_fn(s));
    }
  }
  return s;
}

namespace {

std::string add_fresh_number(Store& s, const EvolvePolicy& policy) {
  std::string name = s.fresh_number(0);
  s.bindings[name] = fresh_value(policy.seed, name);
  return name;
}

Path slice(const Path& p, std::size_t n) { return Path(p.begin(), p.begin() + static_cast<long>(n)); }

Candidate make_candidate(Store store, Path predicted, MutationRule rule, std::size_t prefix_len,
                         std::size_t path_len, std::vector<Label> touched, bool solve) {
  Candidate c{std::move(store), std::move(predicted), rule, {rule}, std::nullopt, prefix_len, std::move(touched)};
  if (prefix_len < path_len) c.rules.push_back(MutationRule::TruncatePrefix);
  if (solve) c.query = build_query(c.predicted, c.store);
  return c;
}

}  // namespace

std::vector<EvolvedBody> evolve_bodies(const Store& store, const DispatchScope& scope,
                                       const EvolvePolicy& policy) {
  std::vector<EvolvedBody> out;
  const bool can_nest = scope.depth + 1 <= policy.max_depth;
  {
    Store s = store;
    std::string name = add_fresh_number(s, policy);
    out.push_back({ReturnConcVar{name}, std::move(s)});
  }
  if (can_nest) {
    Store s = store;
    CanonicalFn fn = default_fn(s);
    out.push_back({ReturnFn{std::move(fn)}, std::move(s)});
  }
  for (const auto& v : scope.vars) out.push_back({ReturnVar{v}, store});
  if (!can_nest) return out;
  for (const auto& g : scope.vars) {
    if (!scope.procs.count(g)) continue;
    for (std::size_t k = 0; k <= scope.vars.size(); ++k) {
      Store s = store;
      CallArg arg;
      if (k == 0) {
        arg = CallArg{add_fresh_number(s, policy), true};
      } else {
        arg = CallArg{scope.vars[k - 1], false};
      }
      std::string result = s.fresh_binder("r");
      Label l = s.fresh_label();
      LetCall call{g, std::move(arg), result, Dispatch{result, {}, l}};
      out.push_back({std::move(call), std::move(s)});
    }
  }
  return out;
}

std::vector<Candidate> enumerate_mutations(const Store& store, const Path& path,
                                           const EvolvePolicy& policy) {
  std::vector<Candidate> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (const auto* fo = std::get_if<FirstOrderC>(&path[i])) {
      const int flipped = fo->outcome ? 0 : 1;
      Path predicted = slice(path, i);
      predicted.push_back(FirstOrderC{flipped, fo->trace});
      out.push_back(make_candidate(store, std::move(predicted),
                                   flipped ? MutationRule::NegateLastTrue : MutationRule::NegateLastFalse,
                                   i + 1, path.size(), {}, true));
      ++i;
      continue;
    }
    const auto* test = std::get_if<TestC>(&path[i]);
    if (!test) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < path.size()) {
      const auto* b = std::get_if<BranchC>(&path[j]);
      if (!b || b->outcome == 1) break;
      ++j;
    }
    if (j >= path.size() || !std::holds_alternative<BranchC>(path[j])) break;
    const BranchC& final = std::get<BranchC>(path[j]);
    const DispatchRef ref = find_dispatch(store, test->label);
    const Dispatch& d = *ref.dispatch;
    const auto* number = std::get_if<TracedValue>(&test->inspected);
    const bool has_proc = std::any_of(d.clauses.begin(), d.clauses.end(), [](const BranchClause& c) {
      return std::holds_alternative<IsProcTest>(c.test);
    });

    if (final.label == d.else_label && d.clauses.size() < policy.max_clauses &&
        (number || !has_proc)) {
      MutationRule rule = !number                ? MutationRule::AddBranchProc
                          : d.clauses.empty()    ? MutationRule::AddBranchEqOnElse
                                                 : MutationRule::AddBranchEqMulti;
      DispatchScope scope = ref.scope;
      ClauseTest new_test = IsProcTest{};
      Trace taken = Trace::lit(1);
      if (number) {
        new_test = EqTraceTest{number->trace};
        taken = Trace::op(PrimOp::NumEq, number->trace, number->trace);
      } else {
        scope.procs.insert(d.scrutinee);
      }
      for (auto& eb : evolve_bodies(store, scope, policy)) {
        Store s = std::move(eb.store);
        Label l = s.fresh_label();
        dispatch_at(s, ref.address).clauses.push_back(BranchClause{l, new_test, std::move(eb.body)});
        Path predicted = slice(path, j);
        predicted.push_back(BranchC{l, 1, taken});
        out.push_back(make_candidate(std::move(s), std::move(predicted), rule, j + 1, path.size(),
                                     {d.else_label, l}, false));
      }
    }

    if (number) {
      auto clause_trace = [&](const BranchClause& c) {
        if (std::holds_alternative<IsProcTest>(c.test)) return Trace::lit(0);
        return Trace::op(PrimOp::NumEq, number->trace, std::get<EqTraceTest>(c.test).trace);
      };
      // Targets: every other equality clause, then the else clause.
      for (std::size_t m = 0; m <= d.clauses.size(); ++m) {
        const bool to_else = m == d.clauses.size();
        if (!to_else && !std::holds_alternative<EqTraceTest>(d.clauses[m].test)) continue;
        const Label target = to_else ? d.else_label : d.clauses[m].label;
        if (target == final.label) continue;
        Path predicted = slice(path, i + 1);
        for (std::size_t k = 0; k < m; ++k) {
          predicted.push_back(BranchC{d.clauses[k].label, 0, clause_trace(d.clauses[k])});
        }
        predicted.push_back(
            BranchC{target, 1, to_else ? Trace::lit(1) : clause_trace(d.clauses[m])});
        out.push_back(make_candidate(store, std::move(predicted), MutationRule::RetargetBranch, j + 1,
                                     path.size(), {final.label, target}, true));
      }
    }
    i = j + 1;
  }
  return out;
}

bool paths_equivalent(const Path& a, const Path& b) { return decisions(a) == decisions(b); }

bool verify_prediction(const Path& predicted, const Path& actual) {
  const Path p = decisions(predicted);
  const Path a = decisions(actual);
  if (p.size() > a.size()) return false;
  return std::equal(p.begin(), p.end(), a.begin());
}

}  // namespace hoconc
