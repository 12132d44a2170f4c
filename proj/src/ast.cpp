#include "hoconc/ast.hpp"

#include <algorithm>
#include <array>

namespace hoconc {

namespace {

struct PrimInfo {
  PrimOp op;
  std::string_view name;
  std::size_t arity;
};

constexpr std::array<PrimInfo, 9> kPrims{{
    {PrimOp::Add, "+", 2},
    {PrimOp::Sub, "-", 2},
    {PrimOp::Mul, "*", 2},
    {PrimOp::NumEq, "=", 2},
    {PrimOp::Le, "<=", 2},
    {PrimOp::Lt, "<", 2},
    {PrimOp::Not, "not", 1},
    {PrimOp::IsProcedure, "procedure?", 1},
    {PrimOp::IsInteger, "integer?", 1},
}};

const PrimInfo& info(PrimOp op) {
  for (const auto& p : kPrims) {
    if (p.op == op) return p;
  }
  throw std::logic_error("unknown primitive");
}

ExprPtr wrap(Expr::Node node, SourcePos pos) {
  return std::make_shared<const Expr>(Expr{std::move(node), pos});
}

void collect_free_vars(const Expr& e, std::set<std::string>& bound, std::set<std::string>& out) {
  std::visit(
      Overloaded{
          [](const IntLit&) {},
          [](const InputVar&) {},
          [](const ErrorExpr&) {},
          [&](const Var& v) {
            if (!bound.count(v.name)) out.insert(v.name);
          },
          [&](const Lambda& l) {
            for (const auto& c : l.captures) {
              if (!bound.count(c)) out.insert(c);
            }
          },
          [&](const App& a) {
            collect_free_vars(*a.fn, bound, out);
            collect_free_vars(*a.arg, bound, out);
          },
          [&](const Let& l) {
            collect_free_vars(*l.rhs, bound, out);
            bool fresh = bound.insert(l.bound).second;
            collect_free_vars(*l.body, bound, out);
            if (fresh) bound.erase(l.bound);
          },
          [&](const Cond& c) {
            for (const auto& cl : c.clauses) {
              collect_free_vars(*cl.test, bound, out);
              collect_free_vars(*cl.body, bound, out);
            }
            collect_free_vars(*c.else_body, bound, out);
          },
          [&](const Prim& p) {
            for (const auto& a : p.args) collect_free_vars(*a, bound, out);
          },
      },
      e.node);
}

void collect_inputs(const Expr& e, std::set<std::string>& out) {
  std::visit(Overloaded{
                 [](const IntLit&) {},
                 [](const Var&) {},
                 [](const ErrorExpr&) {},
                 [&](const InputVar& v) { out.insert(v.name); },
                 [&](const Lambda& l) { collect_inputs(*l.body, out); },
                 [&](const App& a) {
                   collect_inputs(*a.fn, out);
                   collect_inputs(*a.arg, out);
                 },
                 [&](const Let& l) {
                   collect_inputs(*l.rhs, out);
                   collect_inputs(*l.body, out);
                 },
                 [&](const Cond& c) {
                   for (const auto& cl : c.clauses) {
                     collect_inputs(*cl.test, out);
                     collect_inputs(*cl.body, out);
                   }
                   collect_inputs(*c.else_body, out);
                 },
                 [&](const Prim& p) {
                   for (const auto& a : p.args) collect_inputs(*a, out);
                 },
             },
             e.node);
}

void print_into(const Expr& e, std::string& out) {
  std::visit(Overloaded{
                 [&](const IntLit& n) { out += n.value.str(); },
                 [&](const Var& v) { out += v.name; },
                 [&](const InputVar& v) { out += v.name; },
                 [&](const ErrorExpr&) { out += "(error)"; },
                 [&](const Lambda& l) {
                   out += "(lambda (" + l.param + ") ";
                   print_into(*l.body, out);
                   out += ")";
                 },
                 [&](const App& a) {
                   out += "(";
                   print_into(*a.fn, out);
                   out += " ";
                   print_into(*a.arg, out);
                   out += ")";
                 },
                 [&](const Let& l) {
                   out += "(let ((" + l.bound + " ";
                   print_into(*l.rhs, out);
                   out += ")) ";
                   print_into(*l.body, out);
                   out += ")";
                 },
                 [&](const Cond& c) {
                   out += "(cond";
                   for (const auto& cl : c.clauses) {
                     out += " (";
                     print_into(*cl.test, out);
                     out += " ";
                     print_into(*cl.body, out);
                     out += ")";
                   }
                   out += " (else ";
                   print_into(*c.else_body, out);
                   out += "))";
                 },
                 [&](const Prim& p) {
                   out += "(";
                   out += prim_name(p.op);
                   for (const auto& a : p.args) {
                     out += " ";
                     print_into(*a, out);
                   }
                   out += ")";
                 },
             },
             e.node);
}

}  // namespace

std::string_view prim_name(PrimOp op) { return info(op).name; }

std::optional<PrimOp> prim_from_name(std::string_view name) {
  for (const auto& p : kPrims) {
    if (p.name == name) return p.op;
  }
  return std::nullopt;
}

std::size_t prim_arity(PrimOp op) { return info(op).arity; }

bool is_comparison(PrimOp op) {
  return op == PrimOp::NumEq || op == PrimOp::Le || op == PrimOp::Lt;
}

ExprPtr make_int(Int value, SourcePos pos) { return wrap(IntLit{std::move(value)}, pos); }
ExprPtr make_var(std::string name, SourcePos pos) { return wrap(Var{std::move(name)}, pos); }
ExprPtr make_input(std::string name, SourcePos pos) { return wrap(InputVar{std::move(name)}, pos); }

ExprPtr make_lambda(std::string param, ExprPtr body, SourcePos pos) {
  std::set<std::string> bound{param};
  std::set<std::string> free;
  collect_free_vars(*body, bound, free);
  return wrap(Lambda{std::move(param), std::move(body), {free.begin(), free.end()}}, pos);
}

ExprPtr make_app(ExprPtr fn, ExprPtr arg, SourcePos pos) {
  return wrap(App{std::move(fn), std::move(arg)}, pos);
}

ExprPtr make_let(std::string bound, ExprPtr rhs, ExprPtr body, SourcePos pos) {
  return wrap(Let{std::move(bound), std::move(rhs), std::move(body)}, pos);
}

ExprPtr make_cond(std::vector<CondClause> clauses, ExprPtr else_body, SourcePos pos) {
  return wrap(Cond{std::move(clauses), std::move(else_body)}, pos);
}

ExprPtr make_if(ExprPtr test, ExprPtr then_body, ExprPtr else_body, SourcePos pos) {
  return make_cond({CondClause{std::move(test), std::move(then_body)}}, std::move(else_body), pos);
}

ExprPtr make_prim(PrimOp op, std::vector<ExprPtr> args, SourcePos pos) {
  if (args.size() != prim_arity(op)) throw std::invalid_argument("primitive arity mismatch");
  return wrap(Prim{op, std::move(args)}, pos);
}

ExprPtr make_error(SourcePos pos) { return wrap(ErrorExpr{}, pos); }

bool equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      Overloaded{
          [&](const IntLit& x) { return x.value == std::get<IntLit>(b.node).value; },
          [&](const Var& x) { return x.name == std::get<Var>(b.node).name; },
          [&](const InputVar& x) { return x.name == std::get<InputVar>(b.node).name; },
          [&](const ErrorExpr&) { return true; },
          [&](const Lambda& x) {
            const auto& y = std::get<Lambda>(b.node);
            return x.param == y.param && equal(*x.body, *y.body);
          },
          [&](const App& x) {
            const auto& y = std::get<App>(b.node);
            return equal(*x.fn, *y.fn) && equal(*x.arg, *y.arg);
          },
          [&](const Let& x) {
            const auto& y = std::get<Let>(b.node);
            return x.bound == y.bound && equal(*x.rhs, *y.rhs) && equal(*x.body, *y.body);
          },
          [&](const Cond& x) {
            const auto& y = std::get<Cond>(b.node);
            if (x.clauses.size() != y.clauses.size()) return false;
            for (std::size_t i = 0; i < x.clauses.size(); ++i) {
              if (!equal(*x.clauses[i].test, *y.clauses[i].test) ||
                  !equal(*x.clauses[i].body, *y.clauses[i].body)) {
                return false;
              }
            }
            return equal(*x.else_body, *y.else_body);
          },
          [&](const Prim& x) {
            const auto& y = std::get<Prim>(b.node);
            if (x.op != y.op || x.args.size() != y.args.size()) return false;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!equal(*x.args[i], *y.args[i])) return false;
            }
            return true;
          },
      },
      a.node);
}

const InputDecl* Program::find_input(std::string_view name) const {
  auto it = std::find_if(inputs.begin(), inputs.end(),
                         [&](const InputDecl& d) { return d.name == name; });
  return it == inputs.end() ? nullptr : &*it;
}

bool equal(const Program& a, const Program& b) {
  return a.inputs == b.inputs && equal(*a.main, *b.main);
}

std::string print_expr(const Expr& e) {
  std::string out;
  print_into(e, out);
  return out;
}

std::string print_program(const Program& p) {
  std::string out = "(inputs";
  for (const auto& in : p.inputs) {
    out += " (" + in.name + (in.sort == Sort::Number ? " number)" : " function)");
  }
  out += ")\n(main " + print_expr(*p.main) + ")\n";
  return out;
}

std::set<std::string> free_inputs(const Expr& e) {
  std::set<std::string> out;
  collect_inputs(e, out);
  return out;
}

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> bound;
  std::set<std::string> out;
  collect_free_vars(e, bound, out);
  return out;
}

}  // namespace hoconc
