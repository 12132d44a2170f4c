#include "hoconc/concolic.hpp"

#include <optional>
#include <vector>

namespace hoconc {

std::string print_conc_value(const ConcValue& v) {
  if (const auto* tv = std::get_if<TracedValue>(&v)) return tv->value.str();
  return "#<procedure>";
}

std::variant<ConcValue, DynamicError> prim_apply(PrimOp op, std::span<const ConcValue> args) {
  if (args.size() != prim_arity(op)) return DynamicError{"arity mismatch"};
  auto boolean = [](bool b) -> ConcValue {
    return TracedValue{b ? 1 : 0, Trace::lit(b ? 1 : 0)};
  };
  switch (op) {
    case PrimOp::IsProcedure: return boolean(is_function(args[0]));
    case PrimOp::IsInteger: return boolean(!is_function(args[0]));
    case PrimOp::Not: {
      const auto* a = std::get_if<TracedValue>(&args[0]);
      if (!a) return DynamicError{"not applied to a procedure"};
      return ConcValue{TracedValue{a->value == 0 ? 1 : 0, Trace::neg(a->trace)}};
    }
    default: break;
  }
  const auto* a = std::get_if<TracedValue>(&args[0]);
  const auto* b = std::get_if<TracedValue>(&args[1]);
  if (!a || !b) {
    return DynamicError{std::string(prim_name(op)) + " applied to a procedure"};
  }
  Int n;
  switch (op) {
    case PrimOp::Add: n = a->value + b->value; break;
    case PrimOp::Sub: n = a->value - b->value; break;
    case PrimOp::Mul: n = a->value * b->value; break;
    case PrimOp::NumEq: n = a->value == b->value ? 1 : 0; break;
    case PrimOp::Le: n = a->value <= b->value ? 1 : 0; break;
    case PrimOp::Lt: n = a->value < b->value ? 1 : 0; break;
    default: return DynamicError{"unknown primitive"};
  }
  return ConcValue{TracedValue{std::move(n), Trace::op(op, a->trace, b->trace)}};
}

namespace {

using CEnv = Env<ConcValue>;

struct AppFnK {
  const Expr* expr;
  CEnv env;
};
struct AppArgK {
  ConcValue fn;
  const Expr* expr;
};
struct LetK {
  const Let* node;
  CEnv env;
};
struct CondK {
  const Cond* node;
  std::size_t clause;
  CEnv env;
  const Expr* expr;
};
struct PrimK {
  const Prim* node;
  std::vector<ConcValue> done;
  CEnv env;
  const Expr* expr;
};
/// Waiting for the result of a canonical function's call to continue with
/// the nested dispatch.
struct LetCallK {
  const LetCall* call;
  CEnv env;
  SourcePos pos;
};

using Frame = std::variant<AppFnK, AppArgK, LetK, CondK, PrimK, LetCallK>;

struct Apply {
  ConcValue fn;
  ConcValue arg;
  SourcePos pos;
};

class Machine {
 public:
  Machine(const Program& p, const Store& store, std::uint64_t fuel, std::size_t max_path)
      : program_(p), store_(store), fuel_(fuel), max_path_(max_path) {}

  ConcolicRun run() {
    if (fuel_ == 0) return finish({FuelExhausted{}});
    const Expr* expr = program_.main.get();
    CEnv env;
    std::optional<ConcValue> value;
    std::optional<Apply> apply;

    for (;;) {
      if (apply) {
        Apply a = std::move(*apply);
        apply.reset();
        if (!step()) return finish({FuelExhausted{}});
        if (const auto* uc = std::get_if<std::shared_ptr<const ConcClosure>>(&a.fn)) {
          env = env_extend((*uc)->env, (*uc)->lambda->param, std::move(a.arg));
          expr = (*uc)->lambda->body.get();
        } else if (const auto* cc = std::get_if<std::shared_ptr<const CanonClosure>>(&a.fn)) {
          CEnv cenv = env_extend((*cc)->env, (*cc)->fn->param, std::move(a.arg));
          auto r = enter_dispatch((*cc)->fn->body, cenv, a.pos);
          if (!r) return finish(std::move(*pending_bug_));
          if (r->index() == 0) {
            value = std::move(std::get<0>(*r));
          } else {
            apply = std::move(std::get<1>(*r));
          }
        } else {
          return stuck(a.pos, "application of a non-procedure");
        }
        continue;
      }

      if (!value) {
        const Expr& e = *expr;
        if (auto* n = std::get_if<IntLit>(&e.node)) {
          value = TracedValue{n->value, Trace::lit(n->value)};
        } else if (auto* v = std::get_if<Var>(&e.node)) {
          const ConcValue* found = env_lookup(env, v->name);
          if (!found) return stuck(e.pos, "unbound variable " + v->name);
          value = *found;
        } else if (auto* in = std::get_if<InputVar>(&e.node)) {
          auto it = store_.bindings.find(in->name);
          if (it == store_.bindings.end()) return stuck(e.pos, "unbound input " + in->name);
          if (const auto* n = std::get_if<Int>(&it->second)) {
            value = TracedValue{*n, Trace::var(in->name)};
          } else {
            value = ConcValue{std::make_shared<const CanonClosure>(
                CanonClosure{&std::get<CanonicalFn>(it->second), nullptr})};
          }
        } else if (auto* l = std::get_if<Lambda>(&e.node)) {
          value = ConcValue{
              std::make_shared<const ConcClosure>(ConcClosure{l, env_restrict(env, l->captures)})};
        } else if (auto* a = std::get_if<App>(&e.node)) {
          stack_.push_back(AppFnK{&e, env});
          expr = a->fn.get();
        } else if (auto* l = std::get_if<Let>(&e.node)) {
          stack_.push_back(LetK{l, env});
          expr = l->rhs.get();
        } else if (auto* c = std::get_if<Cond>(&e.node)) {
          if (c->clauses.empty()) {
            if (!step()) return finish({FuelExhausted{}});
            expr = c->else_body.get();
          } else {
            stack_.push_back(CondK{c, 0, env, &e});
            expr = c->clauses[0].test.get();
          }
        } else if (auto* p = std::get_if<Prim>(&e.node)) {
          stack_.push_back(PrimK{p, {}, env, &e});
          expr = p->args[0].get();
        } else {
          return finish({Bug{BugKind::ExplicitError, e.pos, "error"}});
        }
        continue;
      }

      if (stack_.empty()) return finish({std::move(*value)});
      Frame frame = std::move(stack_.back());
      stack_.pop_back();
      ConcValue v = std::move(*value);
      value.reset();

      if (auto* k = std::get_if<AppFnK>(&frame)) {
        stack_.push_back(AppArgK{std::move(v), k->expr});
        expr = std::get<App>(k->expr->node).arg.get();
        env = k->env;
      } else if (auto* k = std::get_if<AppArgK>(&frame)) {
        apply = Apply{std::move(k->fn), std::move(v), k->expr->pos};
      } else if (auto* k = std::get_if<LetK>(&frame)) {
        env = env_extend(k->env, k->node->bound, std::move(v));
        expr = k->node->body.get();
      } else if (auto* k = std::get_if<CondK>(&frame)) {
        const auto* tv = std::get_if<TracedValue>(&v);
        if (!tv) return stuck(k->expr->pos, "procedure in test position");
        if (!step()) return finish({FuelExhausted{}});
        const bool taken = tv->value != 0;
        path_.push_back(FirstOrderC{taken ? 1 : 0, tv->trace});
        env = k->env;
        if (taken) {
          expr = k->node->clauses[k->clause].body.get();
        } else if (k->clause + 1 < k->node->clauses.size()) {
          stack_.push_back(CondK{k->node, k->clause + 1, k->env, k->expr});
          expr = k->node->clauses[k->clause + 1].test.get();
        } else {
          expr = k->node->else_body.get();
        }
      } else if (auto* k = std::get_if<PrimK>(&frame)) {
        k->done.push_back(std::move(v));
        if (k->done.size() < k->node->args.size()) {
          env = k->env;
          expr = k->node->args[k->done.size()].get();
          stack_.push_back(std::move(*k));
        } else {
          if (!step()) return finish({FuelExhausted{}});
          auto r = prim_apply(k->node->op, k->done);
          if (auto* err = std::get_if<DynamicError>(&r)) return stuck(k->expr->pos, err->what);
          value = std::move(std::get<ConcValue>(r));
        }
      } else if (auto* k = std::get_if<LetCallK>(&frame)) {
        if (!step()) return finish({FuelExhausted{}});
        CEnv cenv = env_extend(k->env, k->call->result, std::move(v));
        auto r = enter_dispatch(*k->call->then, cenv, k->pos);
        if (!r) return finish(std::move(*pending_bug_));
        if (r->index() == 0) {
          value = std::move(std::get<0>(*r));
        } else {
          apply = std::move(std::get<1>(*r));
        }
      }
    }
  }

 private:
  using DispatchResult = std::optional<std::variant<ConcValue, Apply>>;

  /// Logs the test/branch block of one canonical conditional and selects a
  /// clause. Returns the clause's value, or the call a LetCall body makes
  /// (after pushing its continuation). Clause tests run no user code, so a
  /// block is never interrupted.
  DispatchResult enter_dispatch(const Dispatch& d, const CEnv& cenv, SourcePos pos) {
    const ConcValue* scrutinee = env_lookup(cenv, d.scrutinee);
    if (!scrutinee) return fail(pos, "canonical variable " + d.scrutinee + " unbound");
    const auto* number = std::get_if<TracedValue>(scrutinee);
    path_.push_back(TestC{d.else_label, number ? Inspected{*number} : Inspected{FunctionValue{}}});

    for (const auto& clause : d.clauses) {
      bool hit = false;
      Trace trace = Trace::lit(0);
      if (std::holds_alternative<IsProcTest>(clause.test)) {
        hit = number == nullptr;
        trace = Trace::lit(hit ? 1 : 0);
      } else if (number) {
        const Trace& expected = std::get<EqTraceTest>(clause.test).trace;
        Int want;
        try {
          want = trace_eval(expected, numbers_);
        } catch (const UnboundTraceVar& e) {
          return fail(pos, e.what());
        }
        hit = number->value == want;
        trace = Trace::op(PrimOp::NumEq, number->trace, expected);
      }
      path_.push_back(BranchC{clause.label, hit ? 1 : 0, trace});
      if (hit) return run_body(clause.body, cenv, pos);
    }
    path_.push_back(BranchC{d.else_label, 1, Trace::lit(1)});
    return DispatchResult{ConcValue{TracedValue{0, Trace::lit(0)}}};
  }

  DispatchResult run_body(const BranchBody& body, const CEnv& cenv, SourcePos pos) {
    if (const auto* rv = std::get_if<ReturnVar>(&body)) {
      const ConcValue* v = env_lookup(cenv, rv->name);
      if (!v) return fail(pos, "canonical variable " + rv->name + " unbound");
      return DispatchResult{*v};
    }
    if (const auto* rc = std::get_if<ReturnConcVar>(&body)) {
      auto v = conc_number(rc->name, pos);
      if (!v) return std::nullopt;
      return DispatchResult{ConcValue{std::move(*v)}};
    }
    if (const auto* rf = std::get_if<ReturnFn>(&body)) {
      return DispatchResult{
          ConcValue{std::make_shared<const CanonClosure>(CanonClosure{&*rf->fn, cenv})}};
    }
    const auto& lc = std::get<LetCall>(body);
    const ConcValue* callee = env_lookup(cenv, lc.callee);
    if (!callee) return fail(pos, "canonical variable " + lc.callee + " unbound");
    std::optional<ConcValue> arg;
    if (lc.arg.concolic) {
      auto v = conc_number(lc.arg.name, pos);
      if (!v) return std::nullopt;
      arg = std::move(*v);
    } else {
      const ConcValue* a = env_lookup(cenv, lc.arg.name);
      if (!a) return fail(pos, "canonical variable " + lc.arg.name + " unbound");
      arg = *a;
    }
    stack_.push_back(LetCallK{&lc, cenv, pos});
    return DispatchResult{Apply{*callee, std::move(*arg), pos}};
  }

  std::optional<TracedValue> conc_number(const std::string& name, SourcePos pos) {
    const Int* n = store_.number(name);
    if (!n) {
      fail(pos, "concolic variable " + name + " is not a number");
      return std::nullopt;
    }
    return TracedValue{*n, Trace::var(name)};
  }

  DispatchResult fail(SourcePos pos, std::string why) {
    pending_bug_ = ConcOutcome{Bug{BugKind::Stuck, pos, std::move(why)}};
    return std::nullopt;
  }

  bool step() {
    if (fuel_ == 0 || path_.size() >= max_path_) return false;
    --fuel_;
    return true;
  }

  ConcolicRun stuck(SourcePos pos, std::string why) {
    return finish({Bug{BugKind::Stuck, pos, std::move(why)}});
  }

  ConcolicRun finish(ConcOutcome outcome) { return {std::move(outcome), std::move(path_)}; }

  const Program& program_;
  const Store& store_;
  const NumberEnv numbers_ = store_.numbers();
  std::uint64_t fuel_;
  std::size_t max_path_;
  std::vector<Frame> stack_;
  Path path_;
  std::optional<ConcOutcome> pending_bug_;
};

}  // namespace

ConcolicRun concolic_eval(const Program& p, const Store& store, std::uint64_t fuel, std::size_t max_path) {
  return Machine(p, store, fuel, max_path).run();
}

}  // namespace hoconc
