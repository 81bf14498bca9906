#include "doctest.h"

#include <vector>

#include "gvlam/error.hpp"
#include "gvlam/expr.hpp"
#include "gvlam/prob.hpp"
#include "gvlam/quantale.hpp"

using namespace gvlam;

namespace {
QuantaleValue m(const Rational& q) { return QuantaleValue::metric(Magnitude(q)); }
QuantaleValue minf() { return QuantaleValue::metric(Magnitude::infinity()); }
}  // namespace

TEST_CASE("rationals parse and print") {
  CHECK(parse_rational("7/4") == Rational(7, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(parse_rational("010") == 10);
  CHECK_FALSE(try_parse_rational("abc"));
  CHECK(parse_ext_rational("inf").is_infinite());
  CHECK(ExtRational(2) + ExtRational::infinity() == ExtRational::infinity());
  CHECK(exact_sqrt(Rational(9, 4)) == Rational(3, 2));
  CHECK_FALSE(exact_sqrt(Rational(2)));
}

TEST_CASE("metric quantale: order is reversed, tensor is addition") {
  Quantale V(QuantaleKind::metric);
  CHECK(V.unit() == m(0));
  CHECK(V.bottom() == minf());
  CHECK(V.tensor(m(1), m(Rational(1, 2))) == m(Rational(3, 2)));
  CHECK(V.tensor(m(1), minf()) == minf());
  CHECK(V.leq(m(2), m(1)));
  CHECK_FALSE(V.leq(m(1), m(2)));
  CHECK(V.leq(minf(), m(0)));
  std::vector<QuantaleValue> qs{m(3), m(1), m(2)};
  CHECK(V.join(qs) == m(1));
  CHECK(V.join(std::vector<QuantaleValue>{}) == minf());
  CHECK(V.scalar_mul(Grade::nat(3), m(Rational(1, 2))) == m(Rational(3, 2)));
  CHECK(V.scalar_mul(Grade::nat(0), minf()) == m(0));
  CHECK(V.way_below(m(2), m(1)));
  CHECK_FALSE(V.way_below(m(1), m(1)));
}

TEST_CASE("ultrametric and boolean quantales") {
  Quantale U(QuantaleKind::ultrametric);
  auto u = [](int q) { return QuantaleValue::ultrametric(Magnitude(Rational(q))); };
  CHECK(U.tensor(u(2), u(3)) == u(3));
  CHECK(U.scalar_mul(Grade::nat(5), u(2)) == u(2));
  Quantale B(QuantaleKind::boolean);
  auto b = QuantaleValue::boolean;
  CHECK(B.unit() == b(true));
  CHECK(B.tensor(b(true), b(false)) == b(false));
  CHECK(B.leq(b(false), b(true)));
  std::vector<QuantaleValue> qs{b(false), b(true)};
  CHECK(B.join(qs) == b(true));
  CHECK_THROWS_AS(q_tensor(b(true), u(1)), QuantaleError);
}

TEST_CASE("trivial semiring grade") {
  Quantale V(QuantaleKind::metric);
  CHECK(V.scalar_mul(Grade::infinity(), m(0)) == m(0));
  CHECK(V.scalar_mul(Grade::infinity(), m(1)) == minf());
  Semiring t(SemiringKind::trivial);
  CHECK(t.zero() == t.one());
  CHECK(g_add(Grade::nat(2), Grade::nat(3)) == Grade::nat(5));
  CHECK(g_mul(Grade::nat(2), Grade::nat(3)) == Grade::nat(6));
  CHECK_THROWS(Semiring(SemiringKind::nat).parse_grade("inf"));
}

TEST_CASE("symbolic magnitudes compare through enclosures") {
  Magnitude phi = gaussian_phi(3, 0, 1, 1, 1);  // sqrt(3)/2
  CHECK_FALSE(phi.is_rational());
  CHECK(phi.lower() <= Rational(8660254038, 10000000000));
  CHECK(phi.upper() >= Rational(8660254037, 10000000000));
  CHECK(phi.upper() - phi.lower() < Rational(1, 1000000000));
  CHECK(compare(phi, Magnitude(Rational(1))) < 0);
  CHECK(compare(phi + Magnitude(Rational(3)), Magnitude(Rational(4))) < 0);
  CHECK(phi.scaled(2) == phi + phi);
  CHECK(gaussian_phi(4, 0, 1, 1, 1) == Magnitude(Rational(1)));  // sqrt(4 * 1)/2
  Quantale V(QuantaleKind::metric);
  CHECK(V.leq(QuantaleValue::metric(Magnitude(Rational(4))), QuantaleValue::metric(phi + Magnitude(Rational(3)))));
}

TEST_CASE("parameter expressions and conditions") {
  ParamEnv env{{"n", 1}, {"m", 4}, {"k", 2}};
  CHECK(Expr::parse("abs(n-m)").eval_rational(env) == 3);
  CHECK(Expr::parse("4*k/(m+n)").eval_rational(env) == Rational(8, 5));
  CHECK(Expr::parse("inf").eval_magnitude(env).is_infinite());
  CHECK(Condition::parse("k >= 1 and k <= m+n").holds(env));
  CHECK_FALSE(Condition::parse("n > m").holds(env));
  CHECK(instantiate_template("wait_{n+m}(x)", env) == "wait_5(x)");
  CHECK(identifier_segments("wait_{n+m}") == std::vector<std::string>{"wait", "{n+m}"});
  CHECK(param_literal(Rational(-1, 2)) == "-1/2");
  CHECK_THROWS(Expr::parse("4 * (k"));
}
