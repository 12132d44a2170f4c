#pragma once

#include "hoconc/ast.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <variant>

namespace hoconc {

enum class BugKind { ExplicitError, Stuck };

std::string_view to_string(BugKind kind);

struct Bug {
  BugKind kind;
  SourcePos at;
  std::string detail;
};

struct FuelExhausted {};

/// Result of running a program: a value, a bug, or running out of fuel.
template <class V>
struct BasicOutcome {
  std::variant<V, Bug, FuelExhausted> result;

  bool is_value() const { return result.index() == 0; }
  bool is_bug() const { return result.index() == 1; }
  bool is_bug(BugKind kind) const { return is_bug() && bug().kind == kind; }
  bool is_exhausted() const { return result.index() == 2; }
  const V& value() const { return std::get<0>(result); }
  const Bug& bug() const { return std::get<1>(result); }
};

struct Closure;

/// A closed user-language value.
struct UserValue {
  std::variant<Int, std::shared_ptr<const Closure>> v;

  static UserValue number(Int n) { return UserValue{std::move(n)}; }
  bool is_number() const { return v.index() == 0; }
  bool is_closure() const { return v.index() == 1; }
  const Int& num() const { return std::get<0>(v); }
  const Closure& closure() const { return *std::get<1>(v); }
};

/// Persistent association list; shared tails keep closure capture cheap.
template <class V>
struct EnvNode {
  std::string name;
  V value;
  std::shared_ptr<const EnvNode> next;
};

template <class V>
using Env = std::shared_ptr<const EnvNode<V>>;

template <class V>
Env<V> env_extend(Env<V> env, std::string name, V value) {
  return std::make_shared<const EnvNode<V>>(EnvNode<V>{std::move(name), std::move(value), std::move(env)});
}

template <class V>
const V* env_lookup(const Env<V>& env, std::string_view name) {
  for (const EnvNode<V>* n = env.get(); n; n = n->next.get()) {
    if (n->name == name) return &n->value;
  }
  return nullptr;
}

/// Restricts `env` to the names in `captures`.
template <class V>
Env<V> env_restrict(const Env<V>& env, const std::vector<std::string>& captures) {
  Env<V> out;
  for (const auto& name : captures) {
    if (const V* v = env_lookup(env, name)) out = env_extend(std::move(out), name, *v);
  }
  return out;
}

struct Closure {
  std::string param;
  ExprPtr body;
  Env<UserValue> env;
};

using Outcome = BasicOutcome<UserValue>;

inline constexpr std::uint64_t kDefaultFuel = 1'000'000;

/// Call-by-value reference evaluator. Fuel bounds beta, primitive and
/// conditional steps; fuel 0 is exhausted before anything runs.
/// Conditional tests treat any nonzero number as true; a closure in test
/// position, applying a number, or arithmetic on a closure are Stuck bugs.
Outcome eval_user(const Program& p, const std::map<std::string, UserValue>& bindings,
                  std::uint64_t fuel = kDefaultFuel);

/// Evaluates a closed expression (no inputs).
Outcome eval_closed(const Expr& e, std::uint64_t fuel = kDefaultFuel);

std::string print_value(const UserValue& v);

}  // namespace hoconc
