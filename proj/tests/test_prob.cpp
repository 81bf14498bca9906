#include "doctest.h"

#include <cmath>

#include "gvlam/oracles.hpp"
#include "gvlam/prob.hpp"

using namespace gvlam;

namespace {
Outcome o(std::initializer_list<int> xs) {
  Outcome r;
  for (int x : xs) r.push_back(x);
  return r;
}
}  // namespace

TEST_CASE("finite distributions") {
  FinDist d({{o({1}), Rational(1, 4)}, {o({0}), Rational(1, 2)}, {o({1}), Rational(1, 4)}, {o({5}), 0}});
  CHECK(d.entries().size() == 2);
  CHECK(d.prob(o({1})) == Rational(1, 2));
  CHECK(d.prob(o({7})) == 0);
  CHECK_THROWS(FinDist({{o({0}), Rational(1, 3)}}));
  CHECK(tv_distance(FinDist::point(o({0})), FinDist::point(o({1}))) == 1);
  FinDist pq = product(FinDist::point(o({2})), d);
  CHECK(pq.arity() == 2);
  CHECK(marginal(pq, 1) == d);
  CHECK(permute_coordinates(pq, {1, 0}).prob(o({0, 2})) == Rational(1, 2));
}

TEST_CASE("urn samplers") {
  FinDist r = replace_sampler(2, 1, 1);
  FinDist n = no_replace_sampler(2, 1, 1);
  CHECK(r.entries().size() == 4);
  for (auto& [out, p] : r.entries()) CHECK(p == Rational(1, 4));
  CHECK(n.prob(o({0, 1})) == Rational(1, 2));
  CHECK(n.prob(o({0, 0})) == 0);
  CHECK(tv_distance(r, n) == Rational(1, 2));
  // three draws from {0,0,1}: P(0,0,1) = 1/3 without replacement, 4/27 with
  CHECK(no_replace_sampler(3, 2, 1).prob(o({0, 0, 1})) == Rational(1, 3));
  CHECK(replace_sampler(3, 2, 1).prob(o({0, 0, 1})) == Rational(4, 27));
  CHECK_THROWS(no_replace_sampler(4, 2, 1));
  CHECK(iid_two_point(2, 0, 1, Rational(1, 3)).prob(o({1, 1})) == Rational(1, 9));
}

TEST_CASE("diaconis bound against the brute oracle") {
  for (unsigned total = 1; total <= 6; ++total)
    for (unsigned m = 0; m <= total; ++m)
      for (unsigned k = 1; k <= total; ++k) {
        auto c = check_diaconis(k, m, total - m);
        CAPTURE(k);
        CAPTURE(m);
        CHECK(c.tv == oracles::brute_urn_tv(k, m, total - m));
        CHECK(c.ok);
      }
  CHECK(check_diaconis(2, 1, 1).tv == Rational(1, 2));
}

TEST_CASE("gaussian bound phi") {
  CHECK(gaussian_phi(1, 0, 1, 0, 1) == Magnitude(Rational(0)));
  CHECK(gaussian_phi(1, 0, 1, 2, 1) == Magnitude(Rational(1)));
  CHECK(phi_radicand(2, 0, 1, 1, 2) == PhiRadicand{2, 4, 4});
  auto [lo, hi] = gaussian_phi_enclosure(3, 0, 1, 1, 1);
  CHECK(lo <= hi);
  CHECK(hi - lo < Rational(1, 1000000));
  CHECK(lo.get_d() == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  auto [slo, shi] = scale_by_sqrt({Rational(1), Rational(1)}, 4);
  CHECK(slo <= 2);
  CHECK(shi >= 2);
  // Pinsker-type inequality: TV never exceeds phi for k = 1
  for (double mu : {0.0, 0.5, 2.0})
    for (double s : {1.0, 1.5, 3.0}) {
      double tv = gaussian_tv_numeric(0, 1, mu, s);
      double phi = gaussian_phi(1, 0, 1, Rational(mu), Rational(s)).upper().get_d();
      CHECK(tv <= phi + 1e-9);
      CHECK(tv == doctest::Approx(oracles::gaussian_tv_cdf(0, 1, mu, s)).epsilon(1e-5));
    }
  CHECK(gaussian_tv_equal_variance(0, 1, 1) == doctest::Approx(0.382924922548026).epsilon(1e-10));
}

TEST_CASE("walk endpoint") {
  FinDist sign = replace_sampler(1, 1, 1);
  FinDist e = walk_endpoint(sign, FinDist::point(o({2})));
  CHECK(e.prob(o({-2})) == Rational(1, 2));
  CHECK(e.prob(o({2})) == Rational(1, 2));
  // two steps without replacement from {0,1}: signs differ, endpoint 0 for equal magnitudes
  FinDist z = walk_endpoint(no_replace_sampler(2, 1, 1), FinDist::point(o({3, 3})));
  CHECK(z == FinDist::point(o({0})));
  FinDist mixed = walk_endpoint(replace_sampler(2, 1, 1), iid_two_point(2, 1, 2, Rational(1, 2)));
  Rational total = 0;
  for (auto& [out, p] : mixed.entries()) total += p;
  CHECK(total == 1);
  CHECK(mixed.prob(o({4})) == Rational(1, 16));
  // urn 5/5, coin steps in {1,2}; value from a separate fractions script
  FinDist l = walk_endpoint(replace_sampler(2, 5, 5), iid_two_point(2, 1, 2, Rational(1, 2)));
  FinDist r = walk_endpoint(no_replace_sampler(2, 5, 5), iid_two_point(2, 1, 2, Rational(11, 20)));
  CHECK(tv_distance(l, r) == Rational(13, 200));
  CHECK(oracles::brute_tv(l, r) == Rational(13, 200));
}

TEST_CASE("symmetrisation") {
  SymTensor t = basis_tensor(2, {0, 1});
  SymTensor s = symmetrise(t);
  CHECK(s.coeffs == std::vector<Rational>{0, Rational(1, 2), Rational(1, 2), 0});
  CHECK(is_symmetric(s));
  CHECK_FALSE(is_symmetric(t));
  CHECK(symmetrise(s) == s);
  for (unsigned d = 1; d <= 3; ++d)
    for (unsigned n = 1; n <= 3; ++n) CHECK(check_symmetrisation(d, n, 5).ok());
}
