#pragma once

#include "hoconc/interp.hpp"
#include "hoconc/path.hpp"
#include "hoconc/trace.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace hoconc {

struct CanonicalFn;
struct Dispatch;

// Clause tests.
struct IsProcTest {
  friend bool operator==(const IsProcTest&, const IsProcTest&) = default;
};
/// Scrutinee is a number equal to the value of `trace` under the store.
struct EqTraceTest {
  Trace trace;
  friend bool operator==(const EqTraceTest&, const EqTraceTest&) = default;
};
using ClauseTest = std::variant<IsProcTest, EqTraceTest>;

// Branch bodies.
struct ReturnVar {
  std::string name;
  friend bool operator==(const ReturnVar&, const ReturnVar&) = default;
};
/// Returns the number bound to a concolic variable of the store.
struct ReturnConcVar {
  std::string name;
  friend bool operator==(const ReturnConcVar&, const ReturnConcVar&) = default;
};
struct ReturnFn {
  Box<CanonicalFn> fn;
  friend bool operator==(const ReturnFn&, const ReturnFn&) = default;
};
/// Argument of a LetCall: a canonical binder, or a number concolic variable.
struct CallArg {
  std::string name;
  bool concolic = false;
  friend bool operator==(const CallArg&, const CallArg&) = default;
};
/// `(let ((result (callee arg))) then)`; `then` dispatches on `result`.
struct LetCall {
  std::string callee;
  CallArg arg;
  std::string result;
  Box<Dispatch> then;
  friend bool operator==(const LetCall&, const LetCall&) = default;
};
using BranchBody = std::variant<ReturnVar, ReturnConcVar, ReturnFn, LetCall>;

struct BranchClause {
  Label label;
  ClauseTest test;
  BranchBody body;
  friend bool operator==(const BranchClause&, const BranchClause&) = default;
};

/// Labeled multi-way conditional on the innermost binder. The else clause
/// always returns 0.
struct Dispatch {
  std::string scrutinee;
  std::vector<BranchClause> clauses;
  Label else_label;
  friend bool operator==(const Dispatch&, const Dispatch&) = default;
};

struct CanonicalFn {
  std::string param;
  Dispatch body;
  friend bool operator==(const CanonicalFn&, const CanonicalFn&) = default;
};

using Binding = std::variant<Int, CanonicalFn>;

/// Complete input of one concolic run. Fresh labels and names come from
/// counters carried by the store, so evolution is reproducible.
struct Store {
  std::map<std::string, Binding> bindings;
  std::uint64_t next_label = 0;
  std::uint64_t next_name = 0;

  Label fresh_label();
  /// Fresh number concolic variable `X<n>`, bound to `value`.
  std::string fresh_number(Int value = 0);
  /// Fresh canonical binder name `<prefix><n>`.
  std::string fresh_binder(const std::string& prefix);

  const Int* number(const std::string& name) const;
  const CanonicalFn* function(const std::string& name) const;
  NumberEnv numbers() const;

  friend bool operator==(const Store&, const Store&) = default;
};

/// `(lambda (z) (cond (else 0)))` with a fresh label drawn from `store`.
CanonicalFn default_fn(Store& store);

enum class ViolationKind { UnboundConcolicVar, LabelClash, NonDisjoint, BadScope };

struct Violation {
  ViolationKind kind;
  std::string detail;
};

std::string_view to_string(ViolationKind kind);

/// Properness: (i) concolic variables inside canonical functions are bound
/// to numbers, (ii) labels are unique across the store, (iii) equality
/// tests of one conditional evaluate to pairwise distinct numbers. Also
/// reports canonical binder references that are out of scope.
std::vector<Violation> check_proper(const Store& store);

/// Turns a store binding into a closed user-language value.
UserValue reify(const Store& store, const std::string& name);
std::map<std::string, UserValue> reify_all(const Store& store);

/// The user-language expression a canonical function reifies to.
ExprPtr reify_fn_expr(const Store& store, const CanonicalFn& fn);

/// One step from a dispatch to a nested dispatch: the body of clause
/// `clause` (a ReturnFn's body, or a LetCall's continuation).
struct DispatchStep {
  std::size_t clause = 0;
  friend bool operator==(const DispatchStep&, const DispatchStep&) = default;
};

struct DispatchAddress {
  std::string root;
  std::vector<DispatchStep> steps;
  friend bool operator==(const DispatchAddress&, const DispatchAddress&) = default;
};

/// Variables in scope at a dispatch, innermost last, and those known to hold
/// procedures there.
struct DispatchScope {
  std::vector<std::string> vars;
  std::set<std::string> procs;
  /// Nesting depth of the dispatch; a function input's body is depth 1.
  std::size_t depth = 1;
};

struct DispatchRef {
  DispatchAddress address;
  const Dispatch* dispatch = nullptr;
  DispatchScope scope;
};

class LabelNotFound : public Error {
 public:
  explicit LabelNotFound(Label l);
};

/// Locates the dispatch whose else clause or one of whose clauses carries
/// `label`. Throws LabelNotFound.
DispatchRef find_dispatch(const Store& store, Label label);

/// Every dispatch in the store, in deterministic pre-order.
std::vector<DispatchRef> all_dispatches(const Store& store);

Dispatch& dispatch_at(Store& store, const DispatchAddress& address);
const Dispatch& dispatch_at(const Store& store, const DispatchAddress& address);

/// Structural rendering, e.g.
/// `(lambda (z1) (dispatch z1 l0 (l2 (procedure? z1) (conc X3))))`.
std::string print_canonical(const CanonicalFn& fn);
std::string print_canonical_body(const BranchBody& body);

/// Structural rendering of every binding, one `name = ...` per line.
std::string print_store_structure(const Store& store);

/// `name = value` lines for the given inputs, functions in user-language
/// syntax via reification.
std::string print_store(const Store& store, const std::vector<std::string>& names);

/// Identity of a store for search deduplication: structure and numbers,
/// labels excluded.
std::string fingerprint(const Store& store);

}  // namespace hoconc
