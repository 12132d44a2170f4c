#include "hoconc/ast.hpp"
#include "hoconc/sexpr.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace hoconc;

TEST_SUITE("lang") {
  TEST_CASE("single input identity") {
    Program p = parse_program("(inputs (x number)) (main x)");
    REQUIRE(p.inputs.size() == 1);
    CHECK(p.inputs[0] == InputDecl{"x", Sort::Number});
    const auto* in = std::get_if<InputVar>(&p.main->node);
    REQUIRE(in);
    CHECK(in->name == "x");
  }

  TEST_CASE("closed application") {
    Program p = parse_program("(inputs) (main ((lambda (y) y) 4))");
    CHECK(p.inputs.empty());
    CHECK(equal(*p.main, *make_app(make_lambda("y", make_var("y")), make_int(4))));
  }

  TEST_CASE("cond with application test") {
    Program p = parse_program("(inputs (f function)) (main (cond ((= (f 0) 1) (error)) (else 0)))");
    const auto* c = std::get_if<Cond>(&p.main->node);
    REQUIRE(c);
    REQUIRE(c->clauses.size() == 1);
    auto expected = make_prim(PrimOp::NumEq, {make_app(make_input("f"), make_int(0)), make_int(1)});
    CHECK(equal(*c->clauses[0].test, *expected));
    Program again = parse_program(print_program(p));
    CHECK(equal(p, again));
  }

  TEST_CASE("printing") {
    CHECK(print_expr(*make_int(0)) == "0");
    CHECK(print_expr(*make_lambda("x", make_var("x"))) == "(lambda (x) x)");
    CHECK(print_expr(*make_int(-7)) == "-7");
  }

  TEST_CASE("if desugars to cond") {
    auto a = parse_expr("(if 1 2 3)");
    auto b = parse_expr("(cond (1 2) (else 3))");
    CHECK(equal(*a, *b));
  }

  TEST_CASE("free inputs") {
    CHECK(free_inputs(*parse_expr("((lambda (y) y) 4)")).empty());
    std::vector<InputDecl> xs{{"x", Sort::Number}};
    CHECK(free_inputs(*parse_expr("x", xs)) == std::set<std::string>{"x"});
    Program p = parse_program(
        "(inputs (f function)) (main (cond ((= (+ (f (lambda (x) (* x 2))) (f (lambda (x) (+ x 3)))) 2)"
        " (f (lambda (x) (cond ((= x 3) (error)) (else 0))))) (else 0)))");
    CHECK(free_inputs(*p.main) == std::set<std::string>{"f"});
  }

  TEST_CASE("lambda captures are the free variables") {
    auto e = parse_expr("(lambda (a) (lambda (b) (+ a (+ b 1))))");
    const auto& outer = std::get<Lambda>(e->node);
    CHECK(outer.captures.empty());
    const auto& inner = std::get<Lambda>(outer.body->node);
    CHECK(inner.captures == std::vector<std::string>{"a"});
  }

  TEST_CASE("scope and syntax errors") {
    CHECK_THROWS_AS(parse_program("(inputs) (main y)"), ScopeError);
    CHECK_THROWS_AS(parse_program("(inputs (x number)) (main (lambda (x) x))"), ScopeError);
    CHECK_THROWS_AS(parse_program("(inputs (x number) (x function)) (main 0)"), ScopeError);
    CHECK_THROWS_AS(parse_program("(inputs) (main (+ 1))"), ParseError);
    CHECK_THROWS_AS(parse_program("(inputs) (main (cond (1 2)))"), ParseError);
    CHECK_THROWS_AS(parse_program("(inputs) (main (lambda (cond) 1))"), ParseError);
    CHECK_THROWS_AS(parse_program("(inputs) (main (1 2 3))"), ParseError);
    CHECK_THROWS_AS(parse_program("(inputs) (main 1"), ParseError);
    CHECK_THROWS_AS(parse_program("(main 1)"), ParseError);
    CHECK_THROWS_AS(parse_program("(inputs (x string)) (main 1)"), ParseError);
  }

  TEST_CASE("error positions") {
    try {
      parse_program("(inputs)\n(main (+ 1 zz))");
      FAIL("expected ScopeError");
    } catch (const ScopeError& e) {
      CHECK(e.pos.line == 2);
    }
  }

  TEST_CASE("s-expression reader") {
    auto items = read_sexprs("; comment\n(a (b 1) |q r|) -2");
    REQUIRE(items.size() == 2);
    CHECK(items[0].items.size() == 3);
    CHECK(items[0].items[2].atom == "|q r|");
    CHECK(is_integer_literal(items[1].atom));
    CHECK_FALSE(is_integer_literal("-"));
    CHECK_FALSE(is_integer_literal("1a"));
  }

  TEST_CASE("round trip on random programs") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
      std::string text = oracle::random_program_text(rng);
      Program p = parse_program(text);
      Program q = parse_program(print_program(p));
      CHECK_MESSAGE(equal(p, q), text);
      CHECK(print_program(p) == print_program(q));
      for (const auto& name : free_inputs(*p.main)) CHECK(p.find_input(name) != nullptr);
    }
  }
}
