#include "hoconc/smt.hpp"

#include "hoconc/sexpr.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace hoconc {

void Query::add(Trace trace, bool truthy) {
  trace_vars(trace, vars);
  assertions.push_back({std::move(trace), truthy});
}

Query build_query(const Path& path, const Store& store) {
  Query q;
  for (const auto& c : path) {
    if (const auto* fo = std::get_if<FirstOrderC>(&c)) {
      q.add(fo->trace, fo->outcome != 0);
    } else if (const auto* b = std::get_if<BranchC>(&c)) {
      q.add(b->trace, b->outcome != 0);
    }
  }
  for (const auto& ref : all_dispatches(store)) {
    std::vector<const Trace*> eqs;
    for (const auto& c : ref.dispatch->clauses) {
      if (const auto* eq = std::get_if<EqTraceTest>(&c.test)) eqs.push_back(&eq->trace);
    }
    for (std::size_t i = 0; i < eqs.size(); ++i) {
      for (std::size_t j = i + 1; j < eqs.size(); ++j) {
        q.add(Trace::op(PrimOp::NumEq, *eqs[i], *eqs[j]), false);
      }
    }
  }
  return q;
}

namespace {

std::string smt_int_literal(const Int& n) {
  if (n < 0) return "(- " + Int(-n).str() + ")";
  return n.str();
}

class Encoder {
 public:
  explicit Encoder(const std::vector<std::string>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) index_.emplace(vars[i], i);
  }

  std::string integer(const Trace& t) const {
    return std::visit(Overloaded{
                          [&](const TraceVar& v) { return "v" + std::to_string(index_.at(v.name)); },
                          [&](const TraceLit& l) { return smt_int_literal(l.value); },
                          [&](const TraceNeg& n) { return "(ite " + boolean(n.inner) + " 0 1)"; },
                          [&](const TraceOp& o) {
                            if (is_comparison(o.op)) return "(ite " + boolean(t) + " 1 0)";
                            return "(" + std::string(prim_name(o.op)) + " " + integer(o.lhs) + " " +
                                   integer(o.rhs) + ")";
                          },
                      },
                      t.node().v);
  }

  std::string boolean(const Trace& t) const {
    if (const auto* o = std::get_if<TraceOp>(&t.node().v); o && is_comparison(o->op)) {
      return "(" + std::string(prim_name(o->op)) + " " + integer(o->lhs) + " " + integer(o->rhs) + ")";
    }
    if (const auto* n = std::get_if<TraceNeg>(&t.node().v)) return "(not " + boolean(n->inner) + ")";
    if (const auto* l = std::get_if<TraceLit>(&t.node().v)) return l->value != 0 ? "true" : "false";
    return "(not (= " + integer(t) + " 0))";
  }

 private:
  std::map<std::string, std::size_t> index_;
};

}  // namespace

std::string to_smtlib(const Query& q) {
  Encoder enc(q.vars);
  std::ostringstream out;
  out << "(set-option :produce-models true)\n(set-logic QF_NIA)\n";
  for (std::size_t i = 0; i < q.vars.size(); ++i) out << "(declare-const v" << i << " Int)\n";
  for (const auto& a : q.assertions) {
    const std::string b = enc.boolean(a.trace);
    out << "(assert " << (a.truthy ? b : "(not " + b + ")") << ")\n";
  }
  out << "(check-sat)\n";
  if (!q.vars.empty()) {
    out << "(get-value (";
    for (std::size_t i = 0; i < q.vars.size(); ++i) out << (i ? " v" : "v") << i;
    out << "))\n";
  }
  out << "(exit)\n";
  return out.str();
}

bool model_satisfies(const Query& q, const NumberEnv& model) {
  try {
    for (const auto& a : q.assertions) {
      if ((trace_eval(a.trace, model) != 0) != a.truthy) return false;
    }
  } catch (const UnboundTraceVar&) {
    return false;
  }
  return true;
}

std::string_view to_string(SatStatus s) {
  switch (s) {
    case SatStatus::Sat: return "sat";
    case SatStatus::Unsat: return "unsat";
    case SatStatus::Unknown: return "unknown";
  }
  return "?";
}

SolverConfig SolverConfig::from_env() {
  SolverConfig c;
  if (const char* p = std::getenv("HOCONC_SOLVER"); p && *p) c.path = p;
  return c;
}

namespace {

Int parse_model_int(const SExpr& e) {
  if (e.kind == SExpr::Kind::Atom && is_integer_literal(e.atom)) return Int(e.atom);
  if (e.kind == SExpr::Kind::List && e.items.size() == 2 && e.items[0].kind == SExpr::Kind::Atom &&
      e.items[0].atom == "-") {
    return -parse_model_int(e.items[1]);
  }
  throw ProtocolError("unexpected model value " + to_string(e));
}

}  // namespace

SatResult parse_solver_output(const std::string& output, std::size_t var_count,
                              const std::vector<std::string>& names) {
  std::vector<SExpr> items;
  try {
    items = read_sexprs(output);
  } catch (const ParseError& e) {
    throw ProtocolError(std::string("unreadable solver output: ") + e.what());
  }
  if (items.empty() || items[0].kind != SExpr::Kind::Atom) {
    throw ProtocolError("solver produced no status: '" + output + "'");
  }
  SatResult r;
  const std::string& status = items[0].atom;
  if (status == "unsat") {
    r.status = SatStatus::Unsat;
    return r;
  }
  if (status == "unknown") return r;
  if (status != "sat") throw ProtocolError("unexpected solver status '" + status + "'");
  r.status = SatStatus::Sat;
  if (var_count == 0) return r;
  if (items.size() < 2 || items[1].kind != SExpr::Kind::List) {
    throw ProtocolError("solver produced no model");
  }
  for (const auto& pair : items[1].items) {
    if (pair.kind != SExpr::Kind::List || pair.items.size() != 2 ||
        pair.items[0].kind != SExpr::Kind::Atom || pair.items[0].atom.size() < 2 ||
        pair.items[0].atom[0] != 'v') {
      throw ProtocolError("malformed model entry " + to_string(pair));
    }
    std::size_t idx = 0;
    try {
      idx = std::stoul(pair.items[0].atom.substr(1));
    } catch (const std::exception&) {
      throw ProtocolError("malformed model variable " + pair.items[0].atom);
    }
    if (idx >= var_count || idx >= names.size()) {
      throw ProtocolError("model variable out of range " + pair.items[0].atom);
    }
    r.model[names[idx]] = parse_model_int(pair.items[1]);
  }
  if (r.model.size() != var_count) throw ProtocolError("model is missing variables");
  return r;
}

SatResult Solver::solve(const Query& q) {
  ++stats_.queries;
  if (q.ground()) {
    ++stats_.ground;
    SatResult r;
    r.status = model_satisfies(q, {}) ? SatStatus::Sat : SatStatus::Unsat;
    return r;
  }
  const std::string script = to_smtlib(q);
  if (auto it = cache_.find(script); it != cache_.end()) {
    ++stats_.cache_hits;
    // Variable names can differ between queries with equal scripts.
    SatResult r = it->second;
    NumberEnv model;
    for (std::size_t i = 0; i < q.vars.size() && r.status == SatStatus::Sat; ++i) {
      model[q.vars[i]] = r.model.at("v" + std::to_string(i));
    }
    r.model = std::move(model);
    return r;
  }
  ++stats_.solver_calls;
  std::optional<std::string> output = run_solver_process(config_, script);
  SatResult positional;
  if (output) {
    std::vector<std::string> slots;
    for (std::size_t i = 0; i < q.vars.size(); ++i) slots.push_back("v" + std::to_string(i));
    positional = parse_solver_output(*output, q.vars.size(), slots);
  }
  cache_.emplace(script, positional);
  SatResult r;
  r.status = positional.status;
  for (std::size_t i = 0; i < q.vars.size() && r.status == SatStatus::Sat; ++i) {
    r.model[q.vars[i]] = positional.model.at("v" + std::to_string(i));
  }
  return r;
}

Store apply_model(const Store& store, const NumberEnv& model) {
  Store out = store;
  for (const auto& [name, value] : model) {
    auto it = out.bindings.find(name);
    if (it == out.bindings.end() || !std::holds_alternative<Int>(it->second)) {
      throw ImproperResult("model binds '" + name + "', which is not a number variable of the store");
    }
    it->second = value;
  }
  auto violations = check_proper(out);
  if (!violations.empty()) {
    throw ImproperResult("model breaks properness: " + violations.front().detail);
  }
  return out;
}

}  // namespace hoconc
