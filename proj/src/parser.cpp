#include "hoconc/ast.hpp"
#include "hoconc/sexpr.hpp"

#include <algorithm>
#include <array>

namespace hoconc {

namespace {

constexpr std::array<std::string_view, 8> kKeywords{"lambda", "let",    "cond", "if",
                                                    "else",   "error", "inputs", "main"};

bool is_reserved(std::string_view name) {
  return std::find(kKeywords.begin(), kKeywords.end(), name) != kKeywords.end() ||
         prim_from_name(name).has_value();
}

bool valid_identifier(std::string_view name) {
  if (name.empty() || is_integer_literal(name) || is_reserved(name)) return false;
  return name.find_first_of("|\\\"#'`,") == std::string_view::npos;
}

class ExprParser {
 public:
  explicit ExprParser(const std::vector<InputDecl>& inputs) : inputs_(inputs) {}

  ExprPtr parse(const SExpr& s) {
    if (s.is_atom()) return parse_atom(s);
    if (s.items.empty()) throw ParseError(s.pos, "empty application");
    const SExpr& head = s.items.front();
    if (head.is_atom()) {
      const std::string& h = head.atom;
      if (h == "lambda") return parse_lambda(s);
      if (h == "let") return parse_let(s);
      if (h == "cond") return parse_cond(s);
      if (h == "if") return parse_if(s);
      if (h == "error") {
        if (s.items.size() != 1) throw ParseError(s.pos, "error takes no operands");
        return make_error(s.pos);
      }
      if (h == "else" || h == "inputs" || h == "main") {
        throw ParseError(s.pos, "unexpected '" + h + "'");
      }
      if (auto op = prim_from_name(h)) return parse_prim(*op, s);
    }
    if (s.items.size() != 2) {
      throw ParseError(s.pos, "application takes exactly one operand");
    }
    auto fn = parse(s.items[0]);
    auto arg = parse(s.items[1]);
    return make_app(std::move(fn), std::move(arg), s.pos);
  }

 private:
  ExprPtr parse_atom(const SExpr& s) {
    if (is_integer_literal(s.atom)) return make_int(Int(s.atom), s.pos);
    if (!valid_identifier(s.atom)) throw ParseError(s.pos, "unexpected '" + s.atom + "'");
    if (std::find(scope_.rbegin(), scope_.rend(), s.atom) != scope_.rend()) {
      return make_var(s.atom, s.pos);
    }
    if (is_input(s.atom)) return make_input(s.atom, s.pos);
    throw ScopeError(s.pos, "unbound variable '" + s.atom + "'");
  }

  bool is_input(std::string_view name) const {
    return std::any_of(inputs_.begin(), inputs_.end(),
                       [&](const InputDecl& d) { return d.name == name; });
  }

  std::string binder(const SExpr& s) {
    if (!s.is_atom() || !valid_identifier(s.atom)) {
      throw ParseError(s.pos, "expected an identifier, got '" + to_string(s) + "'");
    }
    if (is_input(s.atom)) throw ScopeError(s.pos, "binder '" + s.atom + "' shadows an input");
    return s.atom;
  }

  ExprPtr parse_lambda(const SExpr& s) {
    if (s.items.size() != 3 || !s.items[1].is_list() || s.items[1].items.size() != 1) {
      throw ParseError(s.pos, "expected (lambda (x) body)");
    }
    std::string param = binder(s.items[1].items[0]);
    scope_.push_back(param);
    auto body = parse(s.items[2]);
    scope_.pop_back();
    return make_lambda(std::move(param), std::move(body), s.pos);
  }

  ExprPtr parse_let(const SExpr& s) {
    if (s.items.size() != 3 || !s.items[1].is_list() || s.items[1].items.size() != 1 ||
        !s.items[1].items[0].is_list() || s.items[1].items[0].items.size() != 2) {
      throw ParseError(s.pos, "expected (let ((x rhs)) body)");
    }
    const SExpr& binding = s.items[1].items[0];
    std::string name = binder(binding.items[0]);
    auto rhs = parse(binding.items[1]);
    scope_.push_back(name);
    auto body = parse(s.items[2]);
    scope_.pop_back();
    return make_let(std::move(name), std::move(rhs), std::move(body), s.pos);
  }

  ExprPtr parse_cond(const SExpr& s) {
    std::vector<CondClause> clauses;
    ExprPtr else_body;
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      const SExpr& cl = s.items[i];
      if (!cl.is_list() || cl.items.size() != 2) {
        throw ParseError(cl.pos, "cond clause must be (test body) or (else body)");
      }
      if (cl.items[0].is_atom("else")) {
        if (i + 1 != s.items.size()) throw ParseError(cl.pos, "else must be the last clause");
        else_body = parse(cl.items[1]);
      } else {
        auto test = parse(cl.items[0]);
        auto body = parse(cl.items[1]);
        clauses.push_back({std::move(test), std::move(body)});
      }
    }
    if (!else_body) throw ParseError(s.pos, "cond requires an else clause");
    return make_cond(std::move(clauses), std::move(else_body), s.pos);
  }

  ExprPtr parse_if(const SExpr& s) {
    if (s.items.size() != 4) throw ParseError(s.pos, "expected (if test then else)");
    auto test = parse(s.items[1]);
    auto then_body = parse(s.items[2]);
    auto else_body = parse(s.items[3]);
    return make_if(std::move(test), std::move(then_body), std::move(else_body), s.pos);
  }

  ExprPtr parse_prim(PrimOp op, const SExpr& s) {
    if (s.items.size() - 1 != prim_arity(op)) {
      throw ParseError(s.pos, std::string(prim_name(op)) + " expects " +
                                  std::to_string(prim_arity(op)) + " operand(s)");
    }
    std::vector<ExprPtr> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(parse(s.items[i]));
    return make_prim(op, std::move(args), s.pos);
  }

  const std::vector<InputDecl>& inputs_;
  std::vector<std::string> scope_;
};

std::vector<InputDecl> parse_inputs(const SExpr& form) {
  std::vector<InputDecl> inputs;
  for (std::size_t i = 1; i < form.items.size(); ++i) {
    const SExpr& d = form.items[i];
    if (!d.is_list() || d.items.size() != 2 || !d.items[0].is_atom() || !d.items[1].is_atom()) {
      throw ParseError(d.pos, "input declaration must be (name number|function)");
    }
    const std::string& name = d.items[0].atom;
    if (!valid_identifier(name)) throw ParseError(d.pos, "invalid input name '" + name + "'");
    Sort sort;
    if (d.items[1].atom == "number") {
      sort = Sort::Number;
    } else if (d.items[1].atom == "function") {
      sort = Sort::Function;
    } else {
      throw ParseError(d.items[1].pos, "unknown sort '" + d.items[1].atom + "'");
    }
    for (const auto& prev : inputs) {
      if (prev.name == name) throw ScopeError(d.pos, "duplicate input '" + name + "'");
    }
    inputs.push_back({name, sort});
  }
  return inputs;
}

}  // namespace

Program parse_program(std::string_view text) {
  auto forms = read_sexprs(text);
  if (forms.size() != 2) {
    throw ParseError(forms.empty() ? SourcePos{1, 1} : forms.back().pos,
                     "expected exactly (inputs ...) followed by (main ...)");
  }
  const SExpr& in = forms[0];
  const SExpr& mn = forms[1];
  if (!in.is_list() || in.items.empty() || !in.items[0].is_atom("inputs")) {
    throw ParseError(in.pos, "expected (inputs ...)");
  }
  if (!mn.is_list() || mn.items.size() != 2 || !mn.items[0].is_atom("main")) {
    throw ParseError(mn.pos, "expected (main <expr>)");
  }
  Program p;
  p.inputs = parse_inputs(in);
  p.main = ExprParser(p.inputs).parse(mn.items[1]);
  return p;
}

ExprPtr parse_expr(std::string_view text, const std::vector<InputDecl>& inputs) {
  auto forms = read_sexprs(text);
  if (forms.size() != 1) throw ParseError(SourcePos{1, 1}, "expected a single expression");
  return ExprParser(inputs).parse(forms[0]);
}

}  // namespace hoconc
