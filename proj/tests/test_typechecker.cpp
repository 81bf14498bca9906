#include "doctest.h"

#include "gvlam/error.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/theory.hpp"
#include "gvlam/typechecker.hpp"
#include "support/generators.hpp"

using namespace gvlam;
using testgen::timed_max_theory;

namespace {
const Signature& sig() { return timed_max_theory().sig; }
Derivation inf(const char* ctx, const char* t) { return infer(sig(), parse_context(ctx), parse_term(t)); }
}  // namespace

TEST_CASE("basic inference") {
  CHECK(inf("", "fn x : X => wait_1(x)").concl.type == parse_type("X -o X"));
  CHECK(inf("x : X, y : X", "max(y, x)").concl.type == parse_type("X"));
  CHECK(inf("p : X * X", "let a (*) b = p in min(a, b)").concl.type == parse_type("X"));
  CHECK(inf("", "!2(fn x : X => x)").concl.type == parse_type("!2 (X -o X)"));
  CHECK(inf("z : !1 X", "copy[1,0] z as a, b in discard promote[0; 1](b; c => derelict c) in derelict a").concl.type ==
        parse_type("X"));
  Derivation d = inf("w : !6 X", "promote[3; 2](w; z => copy[1,1] z as a, b in max(derelict a, derelict b))");
  CHECK(d.concl.type == parse_type("!3 X"));
  CHECK(d.rule == Rule::bang_i);
}

TEST_CASE("type errors carry a subterm path") {
  auto err = [](const char* ctx, const char* t) -> TypeError {
    try {
      inf(ctx, t);
    } catch (const TypeError& e) {
      return e;
    }
    FAIL("expected a type error");
    return TypeError("", {});
  };
  CHECK(err("x : X", "max(x, x)").reason().find("twice") != std::string::npos);
  CHECK(err("x : X, y : X", "wait_1(x)").reason().find("unused") != std::string::npos);
  TypeError g = err("w : !5 X", "promote[3; 2](w; z => derelict z)");
  CHECK(g.reason().find("grade") != std::string::npos);
  CHECK(g.path() == Path{0});
  // the operand of derelict is the offending subterm
  CHECK(err("x : X", "wait_1(wait_1(derelict x))").path() == Path{0, 0, 0});
  CHECK_THROWS_AS(inf("", "nosuch(unit)"), TypeError);
  CHECK_THROWS_AS(inf("d : !1 X", "discard d in unit"), TypeError);
  CHECK_THROWS_AS(inf("z : !3 X", "copy[1,1] z as a, b in max(derelict a, derelict b)"), TypeError);
}

TEST_CASE("exchange and substitution on derivations") {
  Derivation d = inf("x : X, y : X, p : X * X", "let a (*) b = p in max(max(x, a), min(y, b))");
  Derivation e = exchange(d, 0);
  CHECK(e.concl.ctx == parse_context("y : X, x : X, p : X * X"));
  CHECK(same_derivation(e, infer(sig(), e.concl.ctx, e.concl.term)));

  Derivation f = inf("q : X", "wait_2(q)");
  Derivation s = subst_derivation(inf("x : X, y : X", "max(x, y)"), f);
  CHECK(s.concl.ctx == parse_context("x : X, q : X"));
  CHECK(alpha_eq(s.concl.term, parse_term("max(x, wait_2(q))")));
  CHECK(same_derivation(s, infer(sig(), s.concl.ctx, s.concl.term)));

  Derivation r = rename_variable(d, "x", "x9");
  CHECK(r.concl.ctx[0].name == "x9");
  CHECK(to_sexpr(d).find("(tensor_e") != std::string::npos);
}

TEST_CASE("trivial semiring accepts inf grades") {
  Theory th = parse_theory("quantale metric\nsemiring trivial\nground X\n");
  Derivation d = infer(th.sig, parse_context("z : !inf X"), parse_term("copy[inf,inf] z as a, b in derelict a (*) derelict b"));
  CHECK(d.concl.type == parse_type("X * X"));
  CHECK_THROWS(infer(th.sig, parse_context("z : !2 X"), parse_term("derelict z")));
}

TEST_CASE("generated derivations: linearity and uniqueness") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    testgen::TermGen g(seed);
    auto r = g.random_term();
    Derivation d = infer(sig(), r.ctx, r.term);
    CHECK(d.concl.type == r.type);
    auto counts = free_var_counts(r.term);
    CHECK(counts.size() == r.ctx.size());
    for (auto& b : r.ctx.bindings()) CHECK(counts[b.name] == 1);
    Derivation again = check(sig(), r.ctx, r.term, r.type);
    CHECK(same_derivation(d, again));
  }
}
