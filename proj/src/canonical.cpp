#include "hoconc/canonical.hpp"

#include <algorithm>
#include <functional>

namespace hoconc {

Label Store::fresh_label() { return Label{next_label++}; }

std::string Store::fresh_number(Int value) {
  std::string name;
  do {
    name = "X" + std::to_string(next_name++);
  } while (bindings.count(name));
  bindings.emplace(name, std::move(value));
  return name;
}

std::string Store::fresh_binder(const std::string& prefix) {
  std::string name;
  do {
    name = prefix + std::to_string(next_name++);
  } while (bindings.count(name));
  return name;
}

const Int* Store::number(const std::string& name) const {
  auto it = bindings.find(name);
  if (it == bindings.end()) return nullptr;
  return std::get_if<Int>(&it->second);
}

const CanonicalFn* Store::function(const std::string& name) const {
  auto it = bindings.find(name);
  if (it == bindings.end()) return nullptr;
  return std::get_if<CanonicalFn>(&it->second);
}

NumberEnv Store::numbers() const {
  NumberEnv out;
  for (const auto& [name, b] : bindings) {
    if (const auto* n = std::get_if<Int>(&b)) out.emplace(name, *n);
  }
  return out;
}

CanonicalFn default_fn(Store& store) {
  std::string param = store.fresh_binder("z");
  Label l = store.fresh_label();
  return CanonicalFn{param, Dispatch{param, {}, l}};
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::UnboundConcolicVar: return "unbound-concolic-var";
    case ViolationKind::LabelClash: return "label-clash";
    case ViolationKind::NonDisjoint: return "non-disjoint";
    case ViolationKind::BadScope: return "bad-scope";
  }
  return "?";
}

LabelNotFound::LabelNotFound(Label l) : Error("label " + to_string(l) + " not found in store") {}

namespace {

using DispatchVisitor =
    std::function<void(const Dispatch&, const DispatchAddress&, const DispatchScope&)>;

void walk_dispatch(const Dispatch& d, DispatchAddress& addr, const DispatchScope& scope,
                   const DispatchVisitor& visit) {
  visit(d, addr, scope);
  for (std::size_t i = 0; i < d.clauses.size(); ++i) {
    const BranchClause& c = d.clauses[i];
    DispatchScope inner = scope;
    if (std::holds_alternative<IsProcTest>(c.test)) inner.procs.insert(d.scrutinee);
    const Dispatch* next = nullptr;
    if (const auto* rf = std::get_if<ReturnFn>(&c.body)) {
      inner.vars.push_back((*rf->fn).param);
      next = &(*rf->fn).body;
    } else if (const auto* lc = std::get_if<LetCall>(&c.body)) {
      inner.vars.push_back(lc->result);
      next = &*lc->then;
    }
    if (!next) continue;
    ++inner.depth;
    addr.steps.push_back(DispatchStep{i});
    walk_dispatch(*next, addr, inner, visit);
    addr.steps.pop_back();
  }
}

void walk_store(const Store& store, const DispatchVisitor& visit) {
  for (const auto& [name, b] : store.bindings) {
    const auto* fn = std::get_if<CanonicalFn>(&b);
    if (!fn) continue;
    DispatchAddress addr{name, {}};
    DispatchScope scope{{fn->param}, {}, 1};
    walk_dispatch(fn->body, addr, scope, visit);
  }
}

template <class DispatchT>
DispatchT& step_into(DispatchT& d, const DispatchStep& s) {
  if (s.clause >= d.clauses.size()) throw Error("dispatch address out of range");
  auto& body = d.clauses[s.clause].body;
  if (auto* rf = std::get_if<ReturnFn>(&body)) return (*rf->fn).body;
  if (auto* lc = std::get_if<LetCall>(&body)) return *lc->then;
  throw Error("dispatch address does not lead to a nested dispatch");
}

std::string print_test(const ClauseTest& t, const std::string& scrutinee) {
  if (std::holds_alternative<IsProcTest>(t)) return "(procedure? " + scrutinee + ")";
  return "(= " + scrutinee + " " + print_trace(std::get<EqTraceTest>(t).trace) + ")";
}

void print_dispatch(const Dispatch& d, bool labels, std::string& out);

void print_body(const BranchBody& body, bool labels, std::string& out) {
  std::visit(Overloaded{
                 [&](const ReturnVar& v) { out += v.name; },
                 [&](const ReturnConcVar& v) { out += "(conc " + v.name + ")"; },
                 [&](const ReturnFn& f) {
                   out += "(lambda (" + (*f.fn).param + ") ";
                   print_dispatch((*f.fn).body, labels, out);
                   out += ")";
                 },
                 [&](const LetCall& l) {
                   out += "(let " + l.result + " (" + l.callee + " ";
                   out += l.arg.concolic ? "(conc " + l.arg.name + ")" : l.arg.name;
                   out += ") ";
                   print_dispatch(*l.then, labels, out);
                   out += ")";
                 },
             },
             body);
}

void print_dispatch(const Dispatch& d, bool labels, std::string& out) {
  out += "(dispatch " + d.scrutinee;
  if (labels) out += " " + to_string(d.else_label);
  for (const auto& c : d.clauses) {
    out += " (";
    if (labels) out += to_string(c.label) + " ";
    out += print_test(c.test, d.scrutinee) + " ";
    print_body(c.body, labels, out);
    out += ")";
  }
  out += ")";
}

std::string print_fn(const CanonicalFn& fn, bool labels) {
  std::string out = "(lambda (" + fn.param + ") ";
  print_dispatch(fn.body, labels, out);
  return out + ")";
}

ExprPtr reify_dispatch(const Store& store, const NumberEnv& nums, const Dispatch& d);

ExprPtr reify_body(const Store& store, const NumberEnv& nums, const BranchBody& body) {
  return std::visit(
      Overloaded{
          [&](const ReturnVar& v) { return make_var(v.name); },
          [&](const ReturnConcVar& v) { return make_int(nums.at(v.name)); },
          [&](const ReturnFn& f) {
            return make_lambda((*f.fn).param, reify_dispatch(store, nums, (*f.fn).body));
          },
          [&](const LetCall& l) {
            ExprPtr arg = l.arg.concolic ? make_int(nums.at(l.arg.name)) : make_var(l.arg.name);
            return make_let(l.result, make_app(make_var(l.callee), std::move(arg)),
                            reify_dispatch(store, nums, *l.then));
          },
      },
      body);
}

ExprPtr reify_dispatch(const Store& store, const NumberEnv& nums, const Dispatch& d) {
  std::vector<CondClause> clauses;
  for (const auto& c : d.clauses) {
    ExprPtr test;
    if (std::holds_alternative<IsProcTest>(c.test)) {
      test = make_prim(PrimOp::IsProcedure, {make_var(d.scrutinee)});
    } else {
      // Equality against a procedure must not get stuck: guard with integer?.
      Int n = trace_eval(std::get<EqTraceTest>(c.test).trace, nums);
      test = make_if(make_prim(PrimOp::IsInteger, {make_var(d.scrutinee)}),
                     make_prim(PrimOp::NumEq, {make_var(d.scrutinee), make_int(n)}), make_int(0));
    }
    clauses.push_back({std::move(test), reify_body(store, nums, c.body)});
  }
  return make_cond(std::move(clauses), make_int(0));
}

}  // namespace

std::vector<Violation> check_proper(const Store& store) {
  std::vector<Violation> out;
  const NumberEnv nums = store.numbers();
  std::map<Label, int> label_uses;

  auto need_number = [&](const std::string& name, const std::string& where) {
    if (!store.number(name)) {
      out.push_back({ViolationKind::UnboundConcolicVar,
                     "concolic variable " + name + " in " + where + " is not bound to a number"});
      return false;
    }
    return true;
  };
  auto in_scope = [](const DispatchScope& s, const std::string& name) {
    return std::find(s.vars.begin(), s.vars.end(), name) != s.vars.end();
  };

  walk_store(store, [&](const Dispatch& d, const DispatchAddress& addr, const DispatchScope& scope) {
    const std::string where = addr.root;
    ++label_uses[d.else_label];
    if (scope.vars.empty() || scope.vars.back() != d.scrutinee) {
      out.push_back({ViolationKind::BadScope,
                     "dispatch " + to_string(d.else_label) + " does not inspect its innermost binder"});
    }
    std::vector<std::pair<Label, Int>> values;
    for (const auto& c : d.clauses) {
      ++label_uses[c.label];
      DispatchScope clause_scope = scope;
      if (std::holds_alternative<IsProcTest>(c.test)) clause_scope.procs.insert(d.scrutinee);
      if (const auto* eq = std::get_if<EqTraceTest>(&c.test)) {
        bool bound = true;
        for (const auto& v : trace_var_set(eq->trace)) bound = need_number(v, where) && bound;
        if (bound) values.emplace_back(c.label, trace_eval(eq->trace, nums));
      }
      std::visit(Overloaded{
                     [&](const ReturnVar& v) {
                       if (!in_scope(clause_scope, v.name)) {
                         out.push_back({ViolationKind::BadScope, "variable " + v.name + " out of scope"});
                       }
                     },
                     [&](const ReturnConcVar& v) { need_number(v.name, where); },
                     [&](const ReturnFn&) {},
                     [&](const LetCall& l) {
                       if (!in_scope(clause_scope, l.callee) || !clause_scope.procs.count(l.callee)) {
                         out.push_back({ViolationKind::BadScope,
                                        "callee " + l.callee + " is not a procedure in scope"});
                       }
                       if (l.arg.concolic) {
                         need_number(l.arg.name, where);
                       } else if (!in_scope(clause_scope, l.arg.name)) {
                         out.push_back({ViolationKind::BadScope, "argument " + l.arg.name + " out of scope"});
                       }
                       if ((*l.then).scrutinee != l.result) {
                         out.push_back({ViolationKind::BadScope,
                                        "let continuation does not inspect " + l.result});
                       }
                     },
                 },
                 c.body);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        if (values[i].second == values[j].second) {
          out.push_back({ViolationKind::NonDisjoint,
                         "clauses " + to_string(values[i].first) + " and " + to_string(values[j].first) +
                             " both test for " + values[i].second.str()});
        }
      }
    }
  });

  for (const auto& [label, uses] : label_uses) {
    if (uses > 1) {
      out.push_back({ViolationKind::LabelClash,
                     "label " + to_string(label) + " used " + std::to_string(uses) + " times"});
    }
  }
  return out;
}

ExprPtr reify_fn_expr(const Store& store, const CanonicalFn& fn) {
  const NumberEnv nums = store.numbers();
  return make_lambda(fn.param, reify_dispatch(store, nums, fn.body));
}

UserValue reify(const Store& store, const std::string& name) {
  auto it = store.bindings.find(name);
  if (it == store.bindings.end()) throw Error("no binding for '" + name + "'");
  if (const auto* n = std::get_if<Int>(&it->second)) return UserValue::number(*n);
  ExprPtr lam = reify_fn_expr(store, std::get<CanonicalFn>(it->second));
  const auto& l = std::get<Lambda>(lam->node);
  return UserValue{std::make_shared<const Closure>(Closure{l.param, l.body, nullptr})};
}

std::map<std::string, UserValue> reify_all(const Store& store) {
  std::map<std::string, UserValue> out;
  for (const auto& [name, b] : store.bindings) out.emplace(name, reify(store, name));
  return out;
}

DispatchRef find_dispatch(const Store& store, Label label) {
  std::optional<DispatchRef> found;
  walk_store(store, [&](const Dispatch& d, const DispatchAddress& addr, const DispatchScope& scope) {
    if (found) return;
    bool hit = d.else_label == label ||
               std::any_of(d.clauses.begin(), d.clauses.end(),
                           [&](const BranchClause& c) { return c.label == label; });
    if (hit) found = DispatchRef{addr, &d, scope};
  });
  if (!found) throw LabelNotFound(label);
  return *found;
}

std::vector<DispatchRef> all_dispatches(const Store& store) {
  std::vector<DispatchRef> out;
  walk_store(store, [&](const Dispatch& d, const DispatchAddress& addr, const DispatchScope& scope) {
    out.push_back(DispatchRef{addr, &d, scope});
  });
  return out;
}

Dispatch& dispatch_at(Store& store, const DispatchAddress& address) {
  auto it = store.bindings.find(address.root);
  if (it == store.bindings.end()) throw Error("no binding for '" + address.root + "'");
  auto* fn = std::get_if<CanonicalFn>(&it->second);
  if (!fn) throw Error("'" + address.root + "' is not a function input");
  Dispatch* d = &fn->body;
  for (const auto& s : address.steps) d = &step_into(*d, s);
  return *d;
}

const Dispatch& dispatch_at(const Store& store, const DispatchAddress& address) {
  return dispatch_at(const_cast<Store&>(store), address);
}

std::string print_canonical(const CanonicalFn& fn) { return print_fn(fn, true); }

std::string print_canonical_body(const BranchBody& body) {
  std::string out;
  print_body(body, true, out);
  return out;
}

std::string print_store_structure(const Store& store) {
  std::string out;
  for (const auto& [name, b] : store.bindings) {
    out += name + " = ";
    if (const auto* n = std::get_if<Int>(&b)) {
      out += n->str();
    } else {
      out += print_fn(std::get<CanonicalFn>(b), true);
    }
    out += "\n";
  }
  return out;
}

std::string print_store(const Store& store, const std::vector<std::string>& names) {
  std::string out;
  for (const auto& name : names) {
    if (!store.bindings.count(name)) continue;
    out += name + " = " + print_value(reify(store, name)) + "\n";
  }
  return out;
}

std::string fingerprint(const Store& store) {
  std::string out;
  for (const auto& [name, b] : store.bindings) {
    out += name + "=";
    if (const auto* n = std::get_if<Int>(&b)) {
      out += n->str();
    } else {
      out += print_fn(std::get<CanonicalFn>(b), false);
    }
    out += ";";
  }
  return out;
}

}  // namespace hoconc
