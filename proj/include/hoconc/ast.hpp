#pragma once

#include "hoconc/common.hpp"

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hoconc {

enum class PrimOp { Add, Sub, Mul, NumEq, Le, Lt, Not, IsProcedure, IsInteger };

std::string_view prim_name(PrimOp op);
std::optional<PrimOp> prim_from_name(std::string_view name);
std::size_t prim_arity(PrimOp op);
bool is_comparison(PrimOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  Int value;
};
/// Lambda- or let-bound variable.
struct Var {
  std::string name;
};
/// Reference to a declared program input (a concolic variable).
struct InputVar {
  std::string name;
};
struct Lambda {
  std::string param;
  ExprPtr body;
  /// Free variables (bound by enclosing binders) of the whole lambda,
  /// sorted; closures capture only these.
  std::vector<std::string> captures;
};
struct App {
  ExprPtr fn;
  ExprPtr arg;
};
struct Let {
  std::string bound;
  ExprPtr rhs;
  ExprPtr body;
};
struct CondClause {
  ExprPtr test;
  ExprPtr body;
};
struct Cond {
  std::vector<CondClause> clauses;
  ExprPtr else_body;
};
struct Prim {
  PrimOp op;
  std::vector<ExprPtr> args;
};
struct ErrorExpr {};

struct Expr {
  using Node = std::variant<IntLit, Var, InputVar, Lambda, App, Let, Cond, Prim, ErrorExpr>;
  Node node;
  SourcePos pos;
};

ExprPtr make_int(Int value, SourcePos pos = {});
ExprPtr make_var(std::string name, SourcePos pos = {});
ExprPtr make_input(std::string name, SourcePos pos = {});
ExprPtr make_lambda(std::string param, ExprPtr body, SourcePos pos = {});
ExprPtr make_app(ExprPtr fn, ExprPtr arg, SourcePos pos = {});
ExprPtr make_let(std::string bound, ExprPtr rhs, ExprPtr body, SourcePos pos = {});
ExprPtr make_cond(std::vector<CondClause> clauses, ExprPtr else_body, SourcePos pos = {});
ExprPtr make_if(ExprPtr test, ExprPtr then_body, ExprPtr else_body, SourcePos pos = {});
ExprPtr make_prim(PrimOp op, std::vector<ExprPtr> args, SourcePos pos = {});
ExprPtr make_error(SourcePos pos = {});

/// Structural equality; source positions are ignored.
bool equal(const Expr& a, const Expr& b);

enum class Sort { Number, Function };

struct InputDecl {
  std::string name;
  Sort sort;
  bool operator==(const InputDecl&) const = default;
};

struct Program {
  std::vector<InputDecl> inputs;
  ExprPtr main;

  const InputDecl* find_input(std::string_view name) const;
};

bool equal(const Program& a, const Program& b);

/// Parses `(inputs (name number|function) ...) (main <expr>)`.
/// Throws ParseError (malformed text) or ScopeError (unbound variable,
/// binder shadowing an input, duplicate input).
Program parse_program(std::string_view text);

/// Parses a single expression in the scope of `inputs`.
ExprPtr parse_expr(std::string_view text, const std::vector<InputDecl>& inputs = {});

std::string print_expr(const Expr& e);
std::string print_program(const Program& p);

/// Names of InputVar nodes occurring in `e`.
std::set<std::string> free_inputs(const Expr& e);

/// Variables bound by enclosing lambdas/lets that occur free in `e`.
std::set<std::string> free_vars(const Expr& e);

}  // namespace hoconc
