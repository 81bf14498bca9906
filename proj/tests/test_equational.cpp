#include "doctest.h"

#include "gvlam/equational.hpp"
#include "gvlam/error.hpp"
#include "gvlam/metmodel.hpp"
#include "gvlam/parser.hpp"
#include "support/generators.hpp"

using namespace gvlam;
using testgen::timed_max_theory;

namespace {

const Signature& sig() { return timed_max_theory().sig; }

Term rewrite(const char* ctx, const char* t, SchemaId s, Direction dir = Direction::l2r, StepBindings b = {},
             Path path = {}) {
  Derivation d = infer(sig(), parse_context(ctx), parse_term(t));
  RewriteStep st{s, std::move(path), dir, std::move(b)};
  return apply_step(sig(), d, st).concl.term;
}

bool same(const Term& a, const char* b) { return alpha_eq(a, parse_term(b)); }

}  // namespace

TEST_CASE("schema names") {
  CHECK(all_schemas().size() == 22);
  for (auto s : all_schemas()) CHECK(parse_schema(schema_name(s)) == s);
  CHECK_FALSE(parse_schema("nope"));
  CHECK(schema_group(SchemaId::cp_pr) == "interaction");
}

TEST_CASE("monoidal and closed rows") {
  CHECK(same(rewrite("x : X, y : X", "let a (*) b = x (*) y in max(b, a)", SchemaId::pm_beta), "max(y, x)"));
  CHECK(same(rewrite("p : X * X", "let a (*) b = p in a (*) b", SchemaId::pm_eta), "p"));
  CHECK(same(rewrite("x : X", "let unit = unit in x", SchemaId::unit_beta), "x"));
  CHECK(same(rewrite("x : X", "(fn y : X => wait_1(y)) x", SchemaId::lam_beta), "wait_1(x)"));
  CHECK(same(rewrite("f : X -o X", "fn y : X => f y", SchemaId::lam_eta), "f"));
  StepBindings h;
  h.holes = {{0}};
  CHECK(same(rewrite("x : X", "wait_1(x)", SchemaId::lam_beta, Direction::r2l, h), "(fn z : X => wait_1(z)) x"));
  CHECK(same(rewrite("f : X -o X", "f", SchemaId::lam_eta, Direction::r2l), "fn z : X => f z"));
  CHECK_THROWS_AS(rewrite("x : X", "wait_1(x)", SchemaId::lam_beta), RewriteError);
}

TEST_CASE("comonad, comonoid and interaction rows") {
  CHECK(same(rewrite("w : !1 X", "derelict promote[1; 1](w; z => wait_2(derelict z))", SchemaId::dr_beta),
             "wait_2(derelict w)"));
  CHECK(same(rewrite("w : !2 X", "promote[2; 1](w; z => derelict z)", SchemaId::dr_eta), "w"));
  CHECK(same(rewrite("w : !3 X", "copy[1,2] w as a, b in copy[1,1] b as c, d in max(derelict a, max(derelict c, derelict d))",
                     SchemaId::cp_assoc, Direction::r2l),
             "copy[2,1] w as x, d in copy[1,1] x as a, c in max(derelict a, max(derelict c, derelict d))"));
  CHECK(same(rewrite("w : !2 X", "copy[2,0] w as a, b in discard b in wait_1((copy[1,1] a as c, e in min(derelict c, derelict e)))",
                     SchemaId::cp_unit_right),
             "wait_1((copy[1,1] w as c, e in min(derelict c, derelict e)))"));
  CHECK(same(rewrite("v : !3 X", "copy[1,2] v as a, b in max(derelict a, (copy[1,1] b as c, e in min(derelict c, derelict e)))",
                     SchemaId::cp_comm),
             "copy[2,1] v as b, a in max(derelict a, (copy[1,1] b as c, e in min(derelict c, derelict e)))"));
  CHECK(same(rewrite("v : !0 X, x : X", "discard promote[0; 1](v; c => derelict c) in x", SchemaId::ds_pr),
             "discard v in x"));
  // copy of a promotion splits its arguments
  Term t = rewrite("v : !2 X", "copy[1,1] promote[2; 1](v; c => wait_1(derelict c)) as y, z in max(derelict y, derelict z)",
                   SchemaId::cp_pr);
  CHECK(same(t, "copy[1,1] v as a, b in max(derelict promote[1; 1](a; c => wait_1(derelict c)), derelict promote[1; 1](b; c => wait_1(derelict c)))"));
  CHECK_THROWS_AS(rewrite("v : !3 X", "copy[1,2] v as a, b in max(derelict a, (copy[1,1] b as c, e in min(derelict c, derelict e)))",
                          SchemaId::cp_assoc),
                  RewriteError);
}

TEST_CASE("commuting conversions") {
  StepBindings h;
  h.holes = {{0}};
  CHECK(same(rewrite("u : I, x : X", "wait_1(let unit = u in x)", SchemaId::cc_unit, Direction::l2r, h),
             "let unit = u in wait_1(x)"));
  CHECK(same(rewrite("u : I, x : X", "let unit = u in wait_1(x)", SchemaId::cc_unit, Direction::r2l, h),
             "wait_1(let unit = u in x)"));
  StepBindings bad;
  bad.holes = {{1}};
  CHECK_THROWS_AS(rewrite("u : I, x : X", "max(x, x)", SchemaId::cc_unit, Direction::l2r, bad), Error);
}

TEST_CASE("normaliser and equation scripts") {
  Derivation d = infer(sig(), parse_context("x : X"),
                       parse_term("(fn f : X -o X => f x) (fn y : X => let a (*) b = y (*) unit in let unit = b in wait_1(a))"));
  auto r = beta_normalize(sig(), d, 100);
  CHECK_FALSE(r.fuel_exhausted);
  CHECK(same(r.result.concl.term, "wait_1(x)"));
  CHECK(r.steps.size() >= 3);
  CHECK_FALSE(find_redex(r.result.concl.term));
  auto tiny = beta_normalize(sig(), d, 1);
  CHECK(tiny.fuel_exhausted);

  Derivation lhs = infer(sig(), parse_context("x : X"), parse_term("(fn y : X => wait_1(y)) x"));
  Derivation rhs = infer(sig(), parse_context("x : X"), parse_term("wait_1(x)"));
  CHECK(eq_script_check(sig(), lhs, rhs, {{Side::lhs, {SchemaId::lam_beta, {}, Direction::l2r, {}}}}));
  CHECK_FALSE(eq_script_check(sig(), lhs, rhs, {}));
}

TEST_CASE("generated instances keep type and denotation") {
  MetModel m = MetModel::timed(timed_max_theory(), 1);
  for (auto s : all_schemas()) {
    int done = 0;
    for (std::uint64_t seed = 0; done < 3 && seed < 60; ++seed) {
      testgen::TermGen g(seed * 31 + 5, 2);
      auto in = g.instance(s);
      Derivation d = infer(sig(), in.ctx, in.term);
      Derivation r = apply_step(sig(), d, in.step);
      CHECK(r.concl.type == d.concl.type);
      std::size_t pts = 1;
      for (auto& b : in.ctx.bindings()) pts *= m.points(b.type).size();
      if (pts > 300) continue;
      CAPTURE(schema_name(s));
      CHECK(m.interp(d).table == m.interp(r).table);
      ++done;
    }
    CHECK(done == 3);
  }
}
