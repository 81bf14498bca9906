#include "doctest.h"

#include "gvlam/error.hpp"
#include "gvlam/laws.hpp"
#include "gvlam/metmodel.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/vequation.hpp"
#include "support/generators.hpp"

using namespace gvlam;
using testgen::data_path;

namespace {

const Theory& timed() {
  static const Theory th = load_theory(data_path("theories/timed.thy"));
  return th;
}

MetMap den(const MetModel& m, const char* ctx, const char* t) { return m.interp(parse_context(ctx), parse_term(t)); }

}  // namespace

TEST_CASE("finite metric spaces") {
  FinMetSpace t = timed_space(3);
  CHECK(t.size() == 4);
  CHECK(t.dist(0, 3) == ExtRational(3));
  CHECK(t.violations().empty());
  using R = std::vector<ExtRational>;
  CHECK_FALSE(FinMetSpace::from_matrix("bad", {R{0, 1, 5}, R{1, 0, 1}, R{5, 1, 0}}).violations().empty());
  CHECK_FALSE(FinMetSpace::from_matrix("glued", {R{0, 0}, R{0, 0}}).violations().empty());
  FinMetSpace lop = FinMetSpace::from_matrix("lop", {R{0, 1}, R{2, 0}});
  CHECK(lop.violations(false).empty());
  CHECK_FALSE(lop.violations(true).empty());
  FinMetSpace far = FinMetSpace::from_matrix("far", {R{0, ExtRational::infinity()}, R{ExtRational::infinity(), 0}});
  CHECK(far.violations().empty());
  CHECK(point_space().size() == 1);
}

TEST_CASE("timed model distances") {
  MetModel m = MetModel::timed(timed(), 8);
  CHECK(hom_distance(m, den(m, "", "fn x : X => wait_1(x)"), den(m, "", "fn x : X => wait_2(x)")) == ExtRational(1));
  CHECK(hom_distance(m, den(m, "", "!2(fn x : X => wait_1(x))"), den(m, "", "!2(fn x : X => wait_2(x))")) ==
        ExtRational(2));
  CHECK(hom_distance(m, den(m, "x : X", "wait_1(x)"), den(m, "x : X", "wait_4(x)")) == ExtRational(3));
  // saturation at the top point
  Value top = m.eval(parse_term("wait_5(x)"), {{"x", Value::atom(6)}});
  CHECK(top == Value::atom(8));
  Type bx = parse_type("!3 X");
  CHECK(m.dist(bx, Value::atom(1), Value::atom(2)) == ExtRational(3));
  CHECK(m.points(bx).size() == 9);
  CHECK(m.dist(parse_type("X * X"), Value::pair(Value::atom(0), Value::atom(1)),
               Value::pair(Value::atom(2), Value::atom(1))) == ExtRational(2));
  Context c = parse_context("x : !2 X, y : X");
  CHECK(m.context_dist(c, {Value::atom(0), Value::atom(0)}, {Value::atom(1), Value::atom(3)}) == ExtRational(5));
}

TEST_CASE("function spaces and the guard") {
  MetModel m = MetModel::timed(timed(), 2);
  // non-expansive self-maps of {0,1,2}: 27 tables minus those jumping by 2
  CHECK(m.points(parse_type("X -o X")).size() == 17);
  MetModel g = MetModel::timed(timed(), 5);
  g.set_guard(100);
  CHECK_THROWS_AS(g.points(parse_type("X -o X")), GuardExceeded);
}

TEST_CASE("axioms hold in the timed model") {
  MetModel m = MetModel::timed(timed(), 6);
  for (int n = 0; n <= 3; ++n)
    for (int k = 0; k <= 3; ++k) {
      auto w = check_axiom(m, axiom_instantiate(timed(), "wait", {{"n", n}, {"m", k}}));
      CHECK(w.ok);
      CHECK(w.distance == ExtRational(std::abs(n - k)));
      CHECK(check_axiom(m, axiom_instantiate(timed(), "wait_add", {{"n", n}, {"m", k}})).distance == ExtRational(0));
    }
  CHECK(within_bound(ExtRational(1), QuantaleValue::metric(Magnitude(Rational(1)))));
  CHECK_FALSE(within_bound(ExtRational::infinity(), QuantaleValue::metric(Magnitude(Rational(5)))));
}

TEST_CASE("proved bounds dominate model distances") {
  MetModel m = MetModel::timed(timed(), 8);
  for (const char* f : {"proofs/sym_wait.proof", "proofs/trans_wait.proof", "proofs/promotion.proof"}) {
    CAPTURE(f);
    VEquation e = validate(timed(), parse_proof(timed(), read_file(data_path(f))));
    ExtRational d = hom_distance(m, m.interp(e.ctx, e.lhs), m.interp(e.ctx, e.rhs));
    CHECK(within_bound(d, e.bound));
  }
}

TEST_CASE("model files") {
  MetModel m = MetModel::from_spec(timed(), data_path("models/small.model"));
  CHECK(m.ground("X").size() == 3);
  CHECK(hom_distance(m, den(m, "", "fn x : X => wait_1(x)"), den(m, "", "fn x : X => wait_2(x)")) == ExtRational(1));
  CHECK_THROWS_AS(den(m, "x : X", "wait_3(x)"), ModelError);
  CHECK_THROWS_AS(MetModel::parse(timed(), "space X\n0 1\n"), ParseError);
  MetModel partial = MetModel::parse(timed(), "space X\n0 1\n1 0\nend\nmap wait_1\n0 -> 1\nend\n");
  CHECK_THROWS_AS(den(partial, "x : X", "wait_1(x)"), ModelError);
  CHECK_THROWS_AS(MetModel::parse(timed(), "space X\n0 1 5\n1 0 1\n5 1 0\nend\n"), ParseError);
  CHECK_THROWS_AS(MetModel::parse(timed(), "colour X\n"), ParseError);
  CHECK(MetModel::from_spec(timed(), "timed(4)").ground("X").size() == 5);
  CHECK_THROWS_AS(MetModel::from_spec(timed(), "timed(x)"), ModelError);
}

TEST_CASE("expansive interpretations are rejected") {
  MetModel m = MetModel::parse(timed(), "space X\n0 1\n1 0\nend\n");
  m.set_symbol("wait", [](const OpSig&, const std::vector<Value>&) { return Value::atom(0); });
  CHECK_NOTHROW(den(m, "x : X", "wait_1(x)"));
  MetModel bad = MetModel::parse(timed(), "space X\n0 1 2\n1 0 1\n2 1 0\nend\n");
  bad.set_symbol("wait", [](const OpSig&, const std::vector<Value>& a) {
    return Value::atom(a[0].index() == 1 ? 2 : 0);
  });
  CHECK_THROWS_AS(den(bad, "x : X", "wait_1(x)"), ModelError);
}

TEST_CASE("symmetric powers comonad laws") {
  FinMetSpace x = timed_space(2);
  FinMetSpace e2 = E_space(2, x);
  FinMetSpace d2 = dilation(2, x);
  CHECK(e2.d == d2.d);
  CHECK(E_space(0, x).size() == 1);
  auto spaces = standard_spaces(2);
  CHECK(spaces.size() >= 4);
  LawOptions opt;
  opt.grades = {0, 1, 2};
  opt.exec = kernels::Exec::serial;
  LawReport r = check_comonad_laws(spaces, opt);
  CHECK(r.ok());
  CHECK(r.checks > 0);
  CHECK(r.lipschitz_pairs > 0);
}
