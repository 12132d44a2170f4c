#include "hoconc/interp.hpp"

#include <optional>
#include <vector>

namespace hoconc {

std::string_view to_string(BugKind kind) {
  return kind == BugKind::ExplicitError ? "error" : "stuck";
}

std::string print_value(const UserValue& v) {
  if (v.is_number()) return v.num().str();
  const Closure& c = v.closure();
  return "(lambda (" + c.param + ") " + print_expr(*c.body) + ")";
}

namespace {

using UEnv = Env<UserValue>;

struct AppFnK {
  const Expr* expr;
  UEnv env;
};
struct AppArgK {
  UserValue fn;
  const Expr* expr;
};
struct LetK {
  const Let* node;
  UEnv env;
};
struct CondK {
  const Cond* node;
  std::size_t clause;
  UEnv env;
  const Expr* expr;
};
struct PrimK {
  const Prim* node;
  std::vector<UserValue> done;
  UEnv env;
  const Expr* expr;
};

using Frame = std::variant<AppFnK, AppArgK, LetK, CondK, PrimK>;

class Machine {
 public:
  Machine(const std::map<std::string, UserValue>& inputs, std::uint64_t fuel)
      : inputs_(inputs), fuel_(fuel) {}

  Outcome run(const Expr& root) {
    if (fuel_ == 0) return {FuelExhausted{}};
    const Expr* expr = &root;
    UEnv env;
    std::optional<UserValue> value;

    for (;;) {
      if (!value) {
        // Eval mode: either produce a value or push a frame and descend.
        const Expr& e = *expr;
        if (auto* n = std::get_if<IntLit>(&e.node)) {
          value = UserValue::number(n->value);
        } else if (auto* v = std::get_if<Var>(&e.node)) {
          const UserValue* found = env_lookup(env, v->name);
          if (!found) return stuck(e, "unbound variable " + v->name);
          value = *found;
        } else if (auto* in = std::get_if<InputVar>(&e.node)) {
          auto it = inputs_.find(in->name);
          if (it == inputs_.end()) return stuck(e, "unbound input " + in->name);
          value = it->second;
        } else if (auto* l = std::get_if<Lambda>(&e.node)) {
          value = UserValue{std::make_shared<const Closure>(
              Closure{l->param, l->body, env_restrict(env, l->captures)})};
        } else if (auto* a = std::get_if<App>(&e.node)) {
          stack_.push_back(AppFnK{&e, env});
          expr = a->fn.get();
        } else if (auto* l = std::get_if<Let>(&e.node)) {
          stack_.push_back(LetK{l, env});
          expr = l->rhs.get();
        } else if (auto* c = std::get_if<Cond>(&e.node)) {
          if (c->clauses.empty()) {
            if (!step()) return {FuelExhausted{}};
            expr = c->else_body.get();
          } else {
            stack_.push_back(CondK{c, 0, env, &e});
            expr = c->clauses[0].test.get();
          }
        } else if (auto* p = std::get_if<Prim>(&e.node)) {
          stack_.push_back(PrimK{p, {}, env, &e});
          expr = p->args[0].get();
        } else {
          return {Bug{BugKind::ExplicitError, e.pos, "error"}};
        }
        continue;
      }

      if (stack_.empty()) return {std::move(*value)};
      Frame frame = std::move(stack_.back());
      stack_.pop_back();
      UserValue v = std::move(*value);
      value.reset();

      if (auto* k = std::get_if<AppFnK>(&frame)) {
        stack_.push_back(AppArgK{std::move(v), k->expr});
        expr = std::get<App>(k->expr->node).arg.get();
        env = k->env;
      } else if (auto* k = std::get_if<AppArgK>(&frame)) {
        if (!k->fn.is_closure()) return stuck(*k->expr, "application of a non-procedure");
        if (!step()) return {FuelExhausted{}};
        const Closure& c = k->fn.closure();
        env = env_extend(c.env, c.param, std::move(v));
        expr = c.body.get();
      } else if (auto* k = std::get_if<LetK>(&frame)) {
        env = env_extend(k->env, k->node->bound, std::move(v));
        expr = k->node->body.get();
      } else if (auto* k = std::get_if<CondK>(&frame)) {
        if (!v.is_number()) return stuck(*k->expr, "procedure in test position");
        if (!step()) return {FuelExhausted{}};
        env = k->env;
        if (v.num() != 0) {
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
          if (!step()) return {FuelExhausted{}};
          auto r = apply_prim(k->node->op, k->done);
          if (!r) return stuck(*k->expr, "primitive " + std::string(prim_name(k->node->op)) +
                                             " applied to a procedure");
          value = std::move(*r);
        }
      }
    }
  }

 private:
  static std::optional<UserValue> apply_prim(PrimOp op, const std::vector<UserValue>& args) {
    switch (op) {
      case PrimOp::IsProcedure:
        return UserValue::number(args[0].is_closure() ? 1 : 0);
      case PrimOp::IsInteger:
        return UserValue::number(args[0].is_number() ? 1 : 0);
      case PrimOp::Not:
        if (!args[0].is_number()) return std::nullopt;
        return UserValue::number(args[0].num() == 0 ? 1 : 0);
      default:
        break;
    }
    if (!args[0].is_number() || !args[1].is_number()) return std::nullopt;
    const Int& a = args[0].num();
    const Int& b = args[1].num();
    switch (op) {
      case PrimOp::Add: return UserValue::number(a + b);
      case PrimOp::Sub: return UserValue::number(a - b);
      case PrimOp::Mul: return UserValue::number(a * b);
      case PrimOp::NumEq: return UserValue::number(a == b ? 1 : 0);
      case PrimOp::Le: return UserValue::number(a <= b ? 1 : 0);
      case PrimOp::Lt: return UserValue::number(a < b ? 1 : 0);
      default: return std::nullopt;
    }
  }

  bool step() {
    if (fuel_ == 0) return false;
    --fuel_;
    return true;
  }

  static Outcome stuck(const Expr& e, std::string why) {
    return {Bug{BugKind::Stuck, e.pos, std::move(why)}};
  }

  const std::map<std::string, UserValue>& inputs_;
  std::uint64_t fuel_;
  std::vector<Frame> stack_;
};

}  // namespace

Outcome eval_user(const Program& p, const std::map<std::string, UserValue>& bindings,
                  std::uint64_t fuel) {
  return Machine(bindings, fuel).run(*p.main);
}

Outcome eval_closed(const Expr& e, std::uint64_t fuel) {
  static const std::map<std::string, UserValue> kNone;
  return Machine(kNone, fuel).run(e);
}

}  // namespace hoconc
