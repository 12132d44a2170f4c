#include "oracle.hpp"

#include <optional>
#include <set>
#include <variant>

namespace oracle {

using namespace hoconc;

namespace {

bool is_value(const Expr& e) {
  return std::holds_alternative<IntLit>(e.node) || std::holds_alternative<Lambda>(e.node);
}

struct Stop {
  Result::Kind kind;
};

using Step = std::variant<ExprPtr, Stop>;

struct Stepper {
  std::size_t cond_tests = 0;

  Step step(const ExprPtr& e) {
    const Expr& x = *e;
    if (auto* a = std::get_if<App>(&x.node)) {
      if (!is_value(*a->fn)) return wrap(step(a->fn), [&](ExprPtr f) { return make_app(f, a->arg, x.pos); });
      if (!is_value(*a->arg)) return wrap(step(a->arg), [&](ExprPtr v) { return make_app(a->fn, v, x.pos); });
      const auto* lam = std::get_if<Lambda>(&a->fn->node);
      if (!lam) return Stop{Result::Stuck};
      return subst(lam->body, lam->param, a->arg);
    }
    if (auto* l = std::get_if<Let>(&x.node)) {
      if (!is_value(*l->rhs)) {
        return wrap(step(l->rhs), [&](ExprPtr v) { return make_let(l->bound, v, l->body, x.pos); });
      }
      return subst(l->body, l->bound, l->rhs);
    }
    if (auto* c = std::get_if<Cond>(&x.node)) {
      if (c->clauses.empty()) return c->else_body;
      const auto& first = c->clauses.front();
      if (!is_value(*first.test)) {
        return wrap(step(first.test), [&](ExprPtr t) {
          auto clauses = c->clauses;
          clauses.front().test = t;
          return make_cond(clauses, c->else_body, x.pos);
        });
      }
      const auto* n = std::get_if<IntLit>(&first.test->node);
      if (!n) return Stop{Result::Stuck};
      ++cond_tests;
      if (n->value != 0) return first.body;
      std::vector<CondClause> rest(c->clauses.begin() + 1, c->clauses.end());
      if (rest.empty()) return c->else_body;
      return make_cond(rest, c->else_body, x.pos);
    }
    if (auto* p = std::get_if<Prim>(&x.node)) {
      for (std::size_t i = 0; i < p->args.size(); ++i) {
        if (is_value(*p->args[i])) continue;
        return wrap(step(p->args[i]), [&](ExprPtr v) {
          auto args = p->args;
          args[i] = v;
          return make_prim(p->op, args, x.pos);
        });
      }
      return apply_prim(p->op, p->args);
    }
    if (std::holds_alternative<ErrorExpr>(x.node)) return Stop{Result::Error};
    return Stop{Result::Stuck};
  }

  template <class F>
  static Step wrap(Step inner, F rebuild) {
    if (auto* s = std::get_if<Stop>(&inner)) return *s;
    return rebuild(std::get<ExprPtr>(inner));
  }

  static Step apply_prim(PrimOp op, const std::vector<ExprPtr>& args) {
    auto num = [](const ExprPtr& e) -> const Int* {
      auto* n = std::get_if<IntLit>(&e->node);
      return n ? &n->value : nullptr;
    };
    auto b = [](bool v) { return make_int(v ? 1 : 0); };
    switch (op) {
      case PrimOp::IsProcedure: return b(num(args[0]) == nullptr);
      case PrimOp::IsInteger: return b(num(args[0]) != nullptr);
      case PrimOp::Not: {
        const Int* a = num(args[0]);
        if (!a) return Stop{Result::Stuck};
        return b(*a == 0);
      }
      default: break;
    }
    const Int* a = num(args[0]);
    const Int* c = num(args[1]);
    if (!a || !c) return Stop{Result::Stuck};
    switch (op) {
      case PrimOp::Add: return make_int(*a + *c);
      case PrimOp::Sub: return make_int(*a - *c);
      case PrimOp::Mul: return make_int(*a * *c);
      case PrimOp::NumEq: return b(*a == *c);
      case PrimOp::Le: return b(*a <= *c);
      case PrimOp::Lt: return b(*a < *c);
      default: return Stop{Result::Stuck};
    }
  }
};

ExprPtr subst_inputs(const ExprPtr& e, const std::map<std::string, ExprPtr>& inputs) {
  const Expr& x = *e;
  return std::visit(
      Overloaded{
          [&](const IntLit&) { return e; },
          [&](const Var&) { return e; },
          [&](const InputVar& v) { return inputs.at(v.name); },
          [&](const Lambda& l) { return make_lambda(l.param, subst_inputs(l.body, inputs), x.pos); },
          [&](const App& a) { return make_app(subst_inputs(a.fn, inputs), subst_inputs(a.arg, inputs), x.pos); },
          [&](const Let& l) {
            return make_let(l.bound, subst_inputs(l.rhs, inputs), subst_inputs(l.body, inputs), x.pos);
          },
          [&](const Cond& c) {
            std::vector<CondClause> cl;
            for (const auto& k : c.clauses) cl.push_back({subst_inputs(k.test, inputs), subst_inputs(k.body, inputs)});
            return make_cond(cl, subst_inputs(c.else_body, inputs), x.pos);
          },
          [&](const Prim& p) {
            std::vector<ExprPtr> args;
            for (const auto& a : p.args) args.push_back(subst_inputs(a, inputs));
            return make_prim(p.op, args, x.pos);
          },
          [&](const ErrorExpr&) { return e; },
      },
      x.node);
}

}  // namespace

ExprPtr subst(const ExprPtr& e, const std::string& name, const ExprPtr& v) {
  const Expr& x = *e;
  return std::visit(
      Overloaded{
          [&](const IntLit&) { return e; },
          [&](const Var& var) { return var.name == name ? v : e; },
          [&](const InputVar&) { return e; },
          [&](const Lambda& l) {
            if (l.param == name) return e;
            return make_lambda(l.param, subst(l.body, name, v), x.pos);
          },
          [&](const App& a) { return make_app(subst(a.fn, name, v), subst(a.arg, name, v), x.pos); },
          [&](const Let& l) {
            ExprPtr body = l.bound == name ? l.body : subst(l.body, name, v);
            return make_let(l.bound, subst(l.rhs, name, v), body, x.pos);
          },
          [&](const Cond& c) {
            std::vector<CondClause> cl;
            for (const auto& k : c.clauses) cl.push_back({subst(k.test, name, v), subst(k.body, name, v)});
            return make_cond(cl, subst(c.else_body, name, v), x.pos);
          },
          [&](const Prim& p) {
            std::vector<ExprPtr> args;
            for (const auto& a : p.args) args.push_back(subst(a, name, v));
            return make_prim(p.op, args, x.pos);
          },
          [&](const ErrorExpr&) { return e; },
      },
      x.node);
}

ExprPtr value_expr(const UserValue& v) {
  if (v.is_number()) return make_int(v.num());
  const Closure& c = v.closure();
  ExprPtr body = c.body;
  std::set<std::string> done{c.param};
  for (const auto* n = c.env.get(); n; n = n->next.get()) {
    if (!done.insert(n->name).second) continue;
    body = subst(body, n->name, value_expr(n->value));
  }
  return make_lambda(c.param, body);
}

Result evaluate(const Program& p, const std::map<std::string, UserValue>& inputs, std::size_t max_steps) {
  std::map<std::string, ExprPtr> closed;
  for (const auto& [name, v] : inputs) closed.emplace(name, value_expr(v));
  ExprPtr e = subst_inputs(p.main, closed);
  Stepper s;
  Result r;
  while (!is_value(*e)) {
    if (r.steps >= max_steps) {
      r.kind = Result::OutOfSteps;
      r.cond_tests = s.cond_tests;
      return r;
    }
    ++r.steps;
    Step next = s.step(e);
    if (auto* stop = std::get_if<Stop>(&next)) {
      r.kind = stop->kind;
      r.cond_tests = s.cond_tests;
      return r;
    }
    e = std::get<ExprPtr>(next);
  }
  r.kind = Result::Value;
  r.value = e;
  r.cond_tests = s.cond_tests;
  return r;
}

bool agrees(const Outcome& o, const Result& r) {
  switch (r.kind) {
    case Result::Error: return o.is_bug(BugKind::ExplicitError);
    case Result::Stuck: return o.is_bug(BugKind::Stuck);
    case Result::OutOfSteps: return o.is_exhausted();
    case Result::Value: break;
  }
  if (!o.is_value()) return false;
  if (const auto* n = std::get_if<IntLit>(&r.value->node)) {
    return o.value().is_number() && o.value().num() == n->value;
  }
  return o.value().is_closure();
}

Int eval_trace(const Trace& t, const std::map<std::string, Int>& env) {
  const TraceNode& n = t.node();
  if (const auto* v = std::get_if<TraceVar>(&n.v)) return env.at(v->name);
  if (const auto* l = std::get_if<TraceLit>(&n.v)) return l->value;
  if (const auto* g = std::get_if<TraceNeg>(&n.v)) return eval_trace(g->inner, env) == 0 ? 1 : 0;
  const auto& o = std::get<TraceOp>(n.v);
  const Int a = eval_trace(o.lhs, env);
  const Int b = eval_trace(o.rhs, env);
  switch (o.op) {
    case PrimOp::Add: return a + b;
    case PrimOp::Sub: return a - b;
    case PrimOp::Mul: return a * b;
    case PrimOp::NumEq: return a == b ? 1 : 0;
    case PrimOp::Le: return a <= b ? 1 : 0;
    case PrimOp::Lt: return a < b ? 1 : 0;
    default: throw std::logic_error("bad trace operator");
  }
}

namespace {

struct Gen {
  std::mt19937_64& rng;
  const GenOptions& opts;
  int next_var = 0;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool chance(int percent) { return pick(100) < percent; }

  std::string fresh() { return "v" + std::to_string(next_var++); }

  std::string leaf(const std::vector<std::string>& nums) {
    if (!nums.empty() && chance(60)) return nums[static_cast<std::size_t>(pick(static_cast<int>(nums.size())))];
    return std::to_string(pick(11) - 5);
  }

  std::string test(int depth, std::vector<std::string>& nums, std::vector<std::string>& fns) {
    static const char* const cmp[] = {"=", "<", "<="};
    if (chance(10)) return "(not " + num(depth - 1, nums, fns) + ")";
    return std::string("(") + cmp[pick(3)] + " " + num(depth - 1, nums, fns) + " " + num(depth - 1, nums, fns) + ")";
  }

  std::string branch(int depth, std::vector<std::string>& nums, std::vector<std::string>& fns) {
    if (chance(opts.error_percent)) return "(error)";
    return num(depth - 1, nums, fns);
  }

  std::string num(int depth, std::vector<std::string>& nums, std::vector<std::string>& fns) {
    if (depth <= 0) return leaf(nums);
    switch (pick(9)) {
      case 0: return leaf(nums);
      case 1: {
        static const char* const ops[] = {"+", "-", "*"};
        return std::string("(") + ops[pick(3)] + " " + num(depth - 1, nums, fns) + " " + num(depth - 1, nums, fns) + ")";
      }
      case 2:
      case 3: {
        std::string t = test(depth, nums, fns);
        if (chance(30)) return "(if " + t + " " + branch(depth, nums, fns) + " " + branch(depth, nums, fns) + ")";
        return "(cond (" + t + " " + branch(depth, nums, fns) + ") (else " + branch(depth, nums, fns) + "))";
      }
      case 4: {
        std::string v = fresh();
        std::string rhs = num(depth - 1, nums, fns);
        nums.push_back(v);
        std::string body = num(depth - 1, nums, fns);
        nums.pop_back();
        return "(let ((" + v + " " + rhs + ")) " + body + ")";
      }
      case 5: {
        std::string v = fresh();
        std::string arg = num(depth - 1, nums, fns);
        nums.push_back(v);
        std::string body = num(depth - 1, nums, fns);
        nums.pop_back();
        return "((lambda (" + v + ") " + body + ") " + arg + ")";
      }
      case 6: {
        // Bind a local function and call it.
        std::string g = fresh();
        std::string p = fresh();
        nums.push_back(p);
        std::string body = num(depth - 1, nums, fns);
        nums.pop_back();
        fns.push_back(g);
        std::string use = "(" + g + " " + num(depth - 1, nums, fns) + ")";
        fns.pop_back();
        return "(let ((" + g + " (lambda (" + p + ") " + body + "))) " + use + ")";
      }
      default: {
        if (!opts.function_input) return num(depth - 1, nums, fns);
        if (chance(60)) return "(f " + num(depth - 1, nums, fns) + ")";
        std::string p = fresh();
        nums.push_back(p);
        std::string body = num(depth - 1, nums, fns);
        nums.pop_back();
        return "(f (lambda (" + p + ") " + body + "))";
      }
    }
  }
};

}  // namespace

std::string random_program_text(std::mt19937_64& rng, const GenOptions& opts) {
  Gen g{rng, opts};
  std::vector<std::string> nums{"x0", "x1"};
  std::vector<std::string> fns;
  std::string inputs = "(inputs (x0 number) (x1 number)";
  if (opts.function_input) inputs += " (f function)";
  inputs += ")";
  return inputs + "\n(main " + g.num(opts.max_depth, nums, fns) + ")\n";
}

}  // namespace oracle
