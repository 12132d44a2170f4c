#pragma once

#include "hoconc/ast.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace hoconc {

struct TraceNode;

/// Immutable expression trace relating a number to the concolic variables
/// it was computed from. Cheap to copy; subtrees are shared.
class Trace {
 public:
  static Trace var(std::string name);
  static Trace lit(Int value);
  static Trace neg(Trace inner);
  /// `op` must be one of Add, Sub, Mul, NumEq, Le, Lt.
  static Trace op(PrimOp op, Trace lhs, Trace rhs);

  const TraceNode& node() const { return *node_; }
  bool is_lit() const;
  bool is_var() const;

  friend bool operator==(const Trace& a, const Trace& b);

 private:
  explicit Trace(std::shared_ptr<const TraceNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TraceNode> node_;
};

struct TraceVar {
  std::string name;
};
struct TraceLit {
  Int value;
};
struct TraceNeg {
  Trace inner;
};
struct TraceOp {
  PrimOp op;
  Trace lhs;
  Trace rhs;
};

struct TraceNode {
  std::variant<TraceVar, TraceLit, TraceNeg, TraceOp> v;
};

class UnboundTraceVar : public Error {
 public:
  explicit UnboundTraceVar(const std::string& name);
  std::string name;
};

using NumberEnv = std::map<std::string, Int>;

/// Evaluates a trace. Negation maps 0 to 1 and nonzero to 0; comparisons
/// yield 1/0. Throws UnboundTraceVar.
Int trace_eval(const Trace& t, const NumberEnv& numbers);

/// S-expression rendering, e.g. `(= (* X 2) 6)`, `(not x)`.
std::string print_trace(const Trace& t);

/// Variables in first-occurrence (left-to-right, depth-first) order,
/// appended to `out` unless already present.
void trace_vars(const Trace& t, std::vector<std::string>& out);
std::set<std::string> trace_var_set(const Trace& t);

/// Parses the rendering produced by print_trace. Bare identifiers are
/// variables.
Trace parse_trace(std::string_view text);

struct TracedValue {
  Int value;
  Trace trace;
  friend bool operator==(const TracedValue&, const TracedValue&) = default;
};

}  // namespace hoconc
