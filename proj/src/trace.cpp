#include "hoconc/trace.hpp"

#include "hoconc/sexpr.hpp"

#include <algorithm>

namespace hoconc {

Trace Trace::var(std::string name) {
  return Trace(std::make_shared<const TraceNode>(TraceNode{TraceVar{std::move(name)}}));
}

Trace Trace::lit(Int value) {
  return Trace(std::make_shared<const TraceNode>(TraceNode{TraceLit{std::move(value)}}));
}

Trace Trace::neg(Trace inner) {
  return Trace(std::make_shared<const TraceNode>(TraceNode{TraceNeg{std::move(inner)}}));
}

Trace Trace::op(PrimOp op, Trace lhs, Trace rhs) {
  switch (op) {
    case PrimOp::Add:
    case PrimOp::Sub:
    case PrimOp::Mul:
    case PrimOp::NumEq:
    case PrimOp::Le:
    case PrimOp::Lt:
      break;
    default:
      throw std::invalid_argument("trace operator must be arithmetic or a comparison");
  }
  return Trace(std::make_shared<const TraceNode>(TraceNode{TraceOp{op, std::move(lhs), std::move(rhs)}}));
}

bool Trace::is_lit() const { return std::holds_alternative<TraceLit>(node_->v); }
bool Trace::is_var() const { return std::holds_alternative<TraceVar>(node_->v); }

bool operator==(const Trace& a, const Trace& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = a.node_->v;
  const auto& y = b.node_->v;
  if (x.index() != y.index()) return false;
  return std::visit(Overloaded{
                        [&](const TraceVar& v) { return v.name == std::get<TraceVar>(y).name; },
                        [&](const TraceLit& v) { return v.value == std::get<TraceLit>(y).value; },
                        [&](const TraceNeg& v) { return v.inner == std::get<TraceNeg>(y).inner; },
                        [&](const TraceOp& v) {
                          const auto& w = std::get<TraceOp>(y);
                          return v.op == w.op && v.lhs == w.lhs && v.rhs == w.rhs;
                        },
                    },
                    x);
}

UnboundTraceVar::UnboundTraceVar(const std::string& n)
    : Error("unbound trace variable '" + n + "'"), name(n) {}

Int trace_eval(const Trace& t, const NumberEnv& numbers) {
  return std::visit(Overloaded{
                        [&](const TraceVar& v) -> Int {
                          auto it = numbers.find(v.name);
                          if (it == numbers.end()) throw UnboundTraceVar(v.name);
                          return it->second;
                        },
                        [&](const TraceLit& v) -> Int { return v.value; },
                        [&](const TraceNeg& v) -> Int {
                          return trace_eval(v.inner, numbers) == 0 ? 1 : 0;
                        },
                        [&](const TraceOp& v) -> Int {
                          Int a = trace_eval(v.lhs, numbers);
                          Int b = trace_eval(v.rhs, numbers);
                          switch (v.op) {
                            case PrimOp::Add: return a + b;
                            case PrimOp::Sub: return a - b;
                            case PrimOp::Mul: return a * b;
                            case PrimOp::NumEq: return a == b ? 1 : 0;
                            case PrimOp::Le: return a <= b ? 1 : 0;
                            case PrimOp::Lt: return a < b ? 1 : 0;
                            default: throw std::logic_error("bad trace operator");
                          }
                        },
                    },
                    t.node().v);
}

namespace {

void print_into(const Trace& t, std::string& out) {
  std::visit(Overloaded{
                 [&](const TraceVar& v) { out += v.name; },
                 [&](const TraceLit& v) { out += v.value.str(); },
                 [&](const TraceNeg& v) {
                   out += "(not ";
                   print_into(v.inner, out);
                   out += ")";
                 },
                 [&](const TraceOp& v) {
                   out += "(";
                   out += prim_name(v.op);
                   out += " ";
                   print_into(v.lhs, out);
                   out += " ";
                   print_into(v.rhs, out);
                   out += ")";
                 },
             },
             t.node().v);
}

Trace from_sexpr(const SExpr& s) {
  if (s.is_atom()) {
    if (is_integer_literal(s.atom)) return Trace::lit(Int(s.atom));
    return Trace::var(s.atom);
  }
  if (s.items.size() == 2 && s.items[0].is_atom("not")) return Trace::neg(from_sexpr(s.items[1]));
  if (s.items.size() == 3 && s.items[0].is_atom()) {
    if (auto op = prim_from_name(s.items[0].atom)) {
      return Trace::op(*op, from_sexpr(s.items[1]), from_sexpr(s.items[2]));
    }
  }
  throw ParseError(s.pos, "malformed trace '" + to_string(s) + "'");
}

}  // namespace

std::string print_trace(const Trace& t) {
  std::string out;
  print_into(t, out);
  return out;
}

void trace_vars(const Trace& t, std::vector<std::string>& out) {
  std::visit(Overloaded{
                 [&](const TraceVar& v) {
                   if (std::find(out.begin(), out.end(), v.name) == out.end()) out.push_back(v.name);
                 },
                 [&](const TraceLit&) {},
                 [&](const TraceNeg& v) { trace_vars(v.inner, out); },
                 [&](const TraceOp& v) {
                   trace_vars(v.lhs, out);
                   trace_vars(v.rhs, out);
                 },
             },
             t.node().v);
}

std::set<std::string> trace_var_set(const Trace& t) {
  std::vector<std::string> vars;
  trace_vars(t, vars);
  return {vars.begin(), vars.end()};
}

Trace parse_trace(std::string_view text) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1) throw ParseError(SourcePos{1, 1}, "expected a single trace");
  return from_sexpr(forms[0]);
}

}  // namespace hoconc
