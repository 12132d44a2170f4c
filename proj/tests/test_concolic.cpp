#include "hoconc/canonical.hpp"
#include "hoconc/concolic.hpp"
#include "hoconc/evolution.hpp"
#include "oracle.hpp"

#include <doctest.h>

using namespace hoconc;

namespace {

void check_traces_coherent(const Path& path, const Store& store) {
  const NumberEnv nums = store.numbers();
  for (const auto& c : path) {
    if (const auto* fo = std::get_if<FirstOrderC>(&c)) {
      CHECK((oracle::eval_trace(fo->trace, nums) != 0) == (fo->outcome != 0));
    } else if (const auto* t = std::get_if<TestC>(&c)) {
      if (const auto* tv = std::get_if<TracedValue>(&t->inspected)) {
        CHECK(oracle::eval_trace(tv->trace, nums) == tv->value);
      }
    } else if (const auto* b = std::get_if<BranchC>(&c)) {
      CHECK((oracle::eval_trace(b->trace, nums) != 0) == (b->outcome != 0));
    }
  }
}

/// Random structural growth of a store, driven by the mutation rules.
Store grow(const Program& p, std::mt19937_64& rng, int rounds) {
  Store s = initial_store(p, {});
  for (int i = 0; i < rounds; ++i) {
    ConcolicRun run = concolic_eval(p, s, 100'000);
    std::vector<Candidate> structural;
    for (auto& c : enumerate_mutations(s, run.path, {})) {
      if (!c.query) structural.push_back(std::move(c));
    }
    if (structural.empty()) break;
    s = structural[std::uniform_int_distribution<std::size_t>(0, structural.size() - 1)(rng)].store;
    for (auto& [name, b] : s.bindings) {
      if (std::holds_alternative<Int>(b) && name.starts_with("X")) {
        b = Int(std::uniform_int_distribution<int>(-3, 3)(rng));
      }
    }
    if (!check_proper(s).empty()) break;
  }
  return s;
}

}  // namespace

TEST_SUITE("concolic") {
  TEST_CASE("trace evaluation") {
    CHECK(trace_eval(Trace::lit(7), {}) == 7);
    CHECK(trace_eval(Trace::neg(Trace::neg(Trace::lit(5))), {}) == 1);
    CHECK(trace_eval(Trace::op(PrimOp::Mul, Trace::var("X"), Trace::lit(2)), {{"X", 3}}) == 6);
    CHECK_THROWS_AS(trace_eval(Trace::var("Q"), {}), UnboundTraceVar);
    Trace t = parse_trace("(not (<= (- X 2) (* Y -3)))");
    CHECK(print_trace(t) == "(not (<= (- X 2) (* Y -3)))");
    std::vector<std::string> vars;
    trace_vars(t, vars);
    CHECK(vars == std::vector<std::string>{"X", "Y"});
  }

  TEST_CASE("primitive application") {
    auto fn = std::make_shared<const ConcClosure>();
    ConcValue f{fn};
    auto r = prim_apply(PrimOp::IsProcedure, std::vector<ConcValue>{f});
    REQUIRE(std::holds_alternative<ConcValue>(r));
    const auto& tv = std::get<TracedValue>(std::get<ConcValue>(r));
    CHECK(tv.value == 1);
    CHECK(tv.trace == Trace::lit(1));

    std::vector<ConcValue> args{TracedValue{2, Trace::var("x")}, TracedValue{3, Trace::lit(3)}};
    auto sum = prim_apply(PrimOp::Add, args);
    const auto& s = std::get<TracedValue>(std::get<ConcValue>(sum));
    CHECK(s.value == 5);
    CHECK(s.trace == Trace::op(PrimOp::Add, Trace::var("x"), Trace::lit(3)));
    CHECK(oracle::eval_trace(s.trace, {{"x", 2}}) == 5);

    std::vector<ConcValue> bad{TracedValue{4, Trace::lit(4)}, f};
    CHECK(std::holds_alternative<DynamicError>(prim_apply(PrimOp::Mul, bad)));
  }

  TEST_CASE("first-order path") {
    Program p = parse_program("(inputs (x number)) (main (cond ((= x 3) (error)) (else 0)))");
    Store s;
    s.bindings["x"] = Int(0);
    ConcolicRun run = concolic_eval(p, s);
    REQUIRE(run.outcome.is_value());
    CHECK(std::get<TracedValue>(run.outcome.value()).value == 0);
    Path expected{FirstOrderC{0, Trace::op(PrimOp::NumEq, Trace::var("x"), Trace::lit(3))}};
    CHECK(run.path == expected);
    CHECK(print_path(run.path) == "[(fo 0 (= x 3))]");
  }

  TEST_CASE("default canonical function path") {
    Program p = parse_program("(inputs (f function)) (main (f 7))");
    Store s;
    s.bindings["f"] = default_fn(s);
    const Label l0 = s.function("f")->body.else_label;
    ConcolicRun run = concolic_eval(p, s);
    REQUIRE(run.outcome.is_value());
    CHECK(std::get<TracedValue>(run.outcome.value()).value == 0);
    Path expected{TestC{l0, TracedValue{7, Trace::lit(7)}}, BranchC{l0, 1, Trace::lit(1)}};
    CHECK(run.path == expected);
  }

  TEST_CASE("fuel zero") {
    Program p = parse_program("(inputs) (main 1)");
    ConcolicRun run = concolic_eval(p, Store{}, 0);
    CHECK(run.outcome.is_exhausted());
    CHECK(run.path.empty());
  }

  TEST_CASE("path budget") {
    // A canonical function that applies its argument to itself loops.
    Program p = parse_program("(inputs (f function)) (main (f (lambda (g) (f g))))");
    Store s;
    s.bindings["f"] = default_fn(s);
    std::optional<Store> looping;
    for (const auto& c : enumerate_mutations(s, concolic_eval(p, s).path, {})) {
      const auto* call = std::get_if<LetCall>(&c.store.function("f")->body.clauses.at(0).body);
      if (call && !call->arg.concolic) looping = c.store;
    }
    REQUIRE(looping);
    ConcolicRun run = concolic_eval(p, *looping, kDefaultFuel, 50);
    CHECK(run.outcome.is_exhausted());
    CHECK(run.path.size() <= 52);
    CHECK_FALSE(check_block_shape(run.path).has_value());
  }

  TEST_CASE("agrees with the reference interpreter and the oracle") {
    std::mt19937_64 rng(5);
    int bug_runs = 0;
    for (int i = 0; i < 150; ++i) {
      std::string text = oracle::random_program_text(rng);
      Program p = parse_program(text);
      Store s = grow(p, rng, 3);
      s.bindings["x0"] = Int(std::uniform_int_distribution<int>(-3, 3)(rng));
      s.bindings["x1"] = Int(std::uniform_int_distribution<int>(-3, 3)(rng));
      if (!check_proper(s).empty()) continue;
      ConcolicRun run = concolic_eval(p, s, 200'000);
      auto inputs = reify_all(s);
      Outcome o = eval_user(p, inputs, 2'000'000);
      oracle::Result r = oracle::evaluate(p, inputs);
      CHECK_MESSAGE(oracle::agrees(o, r), text);
      CHECK_FALSE(check_block_shape(run.path).has_value());
      check_traces_coherent(run.path, s);
      if (run.outcome.is_exhausted()) continue;
      bug_runs += run.outcome.is_bug() ? 1 : 0;
      REQUIRE(run.outcome.result.index() == o.result.index());
      if (run.outcome.is_bug()) {
        CHECK_MESSAGE(run.outcome.bug().kind == o.bug().kind, text << print_store_structure(s));
      } else if (const auto* tv = std::get_if<TracedValue>(&run.outcome.value())) {
        REQUIRE(o.value().is_number());
        CHECK(tv->value == o.value().num());
        CHECK(oracle::eval_trace(tv->trace, s.numbers()) == tv->value);
      } else {
        CHECK(o.value().is_closure());
      }
    }
    CHECK(bug_runs > 0);
  }

  TEST_CASE("first-order constraints count the evaluated tests") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
      oracle::GenOptions opts;
      opts.function_input = false;
      Program p = parse_program(oracle::random_program_text(rng, opts));
      Store s;
      s.bindings["x0"] = Int(i % 5 - 2);
      s.bindings["x1"] = Int(1);
      ConcolicRun run = concolic_eval(p, s);
      auto in = reify_all(s);
      oracle::Result r = oracle::evaluate(p, in);
      if (r.kind == oracle::Result::OutOfSteps) continue;
      CHECK(run.path.size() == r.cond_tests);
    }
  }

  TEST_CASE("determinism") {
    Program p = parse_program(
        "(inputs (f function)) (main (cond ((= (+ (f (lambda (x) (* x 2))) (f (lambda (x) (+ x 3)))) 2)"
        " (f (lambda (x) (cond ((= x 3) (error)) (else 0))))) (else 0)))");
    std::mt19937_64 a(1), b(1);
    Store s1 = grow(p, a, 4);
    Store s2 = grow(p, b, 4);
    CHECK(s1 == s2);
    CHECK(concolic_eval(p, s1).path == concolic_eval(p, s2).path);
  }

  TEST_CASE("path json round trip") {
    Path p{FirstOrderC{1, parse_trace("(< x 2)")}, TestC{Label{4}, TracedValue{-3, parse_trace("(- 0 y)")}},
           BranchC{Label{5}, 0, parse_trace("(= (- 0 y) 1)")}, BranchC{Label{4}, 1, Trace::lit(1)},
           TestC{Label{9}, FunctionValue{}}, BranchC{Label{9}, 1, Trace::lit(1)}};
    Path back;
    for (const auto& j : to_json(p)) back.push_back(constraint_from_json(j));
    CHECK(back == p);
    CHECK_FALSE(check_block_shape(p).has_value());
    Path broken{TestC{Label{1}, FunctionValue{}}, FirstOrderC{0, Trace::lit(0)}};
    CHECK(check_block_shape(broken).has_value());
  }
}
