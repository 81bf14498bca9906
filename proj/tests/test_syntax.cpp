#include "doctest.h"

#include "gvlam/error.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/sexpr.hpp"
#include "gvlam/syntax.hpp"
#include "support/generators.hpp"

using namespace gvlam;

TEST_CASE("types parse and print") {
  CHECK(to_string(parse_type("!2 (X -o X)")) == "!2 (X -o X)");
  CHECK(parse_type("X * X -o I") == lolli_type(tensor_type(ground_type("X"), ground_type("X")), unit_type()));
  CHECK(parse_type("X -o X -o X") == lolli_type(ground_type("X"), lolli_type(ground_type("X"), ground_type("X"))));
  CHECK(parse_type("!inf X") == bang_type(Grade::infinity(), ground_type("X")));
  CHECK_THROWS_AS(parse_type("X -o"), ParseError);
}

TEST_CASE("terms round-trip through the printer") {
  const char* samples[] = {
      "fn x : X => wait_1(x)",
      "let x (*) y = p in max(x, y)",
      "let unit = u in v",
      "promote[3; 1, 1](a, b; x, y => max(derelict x, derelict y))",
      "copy[1,2] w as x1, r in copy[1,1] r as x2, x3 in add(add(derelict x1, derelict x2), derelict x3)",
      "discard d in unit",
      "(fn x : X => x) y",
      "!2(fn x : X => x)",
      "f (g x)",
  };
  for (auto s : samples) {
    Term t = parse_term(s);
    CAPTURE(s);
    CHECK(syntactically_equal(parse_term(to_string(t)), t));
  }
}

TEST_CASE("parse errors carry line and column") {
  try {
    parse_term("fn x : X =>\n  wait_1(x");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 1);
  }
  CHECK_THROWS_AS(parse_term("promote[1; 1](a; => x)"), ParseError);
  CHECK_THROWS_AS(parse_term("copy[1,1] v as x, x in x"), ParseError);
  CHECK_THROWS_AS(parse_term("op()"), ParseError);
}

TEST_CASE("free variables, alpha equivalence and substitution") {
  Term t = parse_term("fn x : X => max(x, y)");
  CHECK(free_vars(t) == std::vector<std::string>{"y"});
  CHECK(alpha_eq(t, parse_term("fn z : X => max(z, y)")));
  CHECK_FALSE(alpha_eq(t, parse_term("fn z : X => max(y, z)")));
  // capture-avoiding: substituting x for y renames the binder
  Term s = substitute(t, var("x"), "y");
  CHECK(free_vars(s) == std::vector<std::string>{"x"});
  CHECK(alpha_eq(s, parse_term("fn w : X => max(w, x)")));
  Term c = parse_term("copy[1,1] v as a, b in max(derelict a, derelict b)");
  CHECK(binders_of_child(c, 1) == std::vector<std::string>{"a", "b"});
  CHECK(subterm_at(c, {1, 0}).as<term::Derelict>());
  CHECK(fresh_name("x", {"x", "x1"}) != "x");
}

TEST_CASE("contexts and shuffles") {
  Context a = parse_context("x : X, y : X");
  Context b = parse_context("[z : !2 X]");
  CHECK(a.size() == 2);
  CHECK(to_string(b) == "z : !2 X");
  auto all = enumerate_shuffles({a, b});
  CHECK(all.size() == 3);
  for (auto& c : all) CHECK(is_shuffle(c, {a, b}));
  CHECK_FALSE(is_shuffle(parse_context("y : X, x : X, z : !2 X"), {a, b}));
  CHECK(is_permutation(parse_context("y : X, x : X"), a));
  CHECK(parse_context("").empty());
  CHECK_THROWS(parse_context("x : X, x : X"));
}

TEST_CASE("s-expressions") {
  SExpr e = parse_sexpr("(weak :q \"1/2\" (axiom wait :n 1 :m 2)) ; comment");
  CHECK(e.head() == "weak");
  REQUIRE(e.keyword("q"));
  CHECK(e.keyword("q")->is_string());
  CHECK(e.positional().size() == 1);
  CHECK(parse_sexpr(to_string(e)).items.size() == e.items.size());
  CHECK_THROWS_AS(parse_sexpr("(a (b)"), ParseError);
  CHECK_THROWS_AS(parse_sexpr("a b"), ParseError);
}

TEST_CASE("generated terms round-trip") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    testgen::TermGen g(seed);
    auto r = g.random_term();
    CHECK(syntactically_equal(parse_term(to_string(r.term)), r.term));
    CHECK(parse_context(to_string(r.ctx)) == r.ctx);
  }
}
