#include "doctest.h"

#include <cmath>

#include "gvlam/error.hpp"
#include "gvlam/oracles.hpp"
#include "gvlam/parser.hpp"

using namespace gvlam;
using namespace gvlam::oracles;

TEST_CASE("permutations") {
  auto p = perm_group(3);
  CHECK(p.size() == 6);
  CHECK(p.front() == std::vector<std::size_t>{0, 1, 2});
  CHECK(p.back() == std::vector<std::size_t>{2, 1, 0});
  CHECK(perm_group(5).size() == 120);
  CHECK(perm_group(0).size() == 1);
}

TEST_CASE("interleavings agree with shuffles") {
  Context a = parse_context("x : X, y : X");
  Context b = parse_context("u : X, v : X");
  auto brute = brute_interleavings({a, b});
  CHECK(brute.size() == 6);
  CHECK(enumerate_shuffles({a, b}).size() == brute.size());
  for (auto& c : brute) CHECK(is_shuffle(c, {a, b}));
}

TEST_CASE("brute total variation") {
  FinDist p({{{0}, Rational(1, 2)}, {{1}, Rational(1, 2)}});
  FinDist q({{{1}, Rational(1, 4)}, {{2}, Rational(3, 4)}});
  CHECK(brute_tv(p, q) == Rational(3, 4));
  CHECK(brute_tv(p, q) == tv_distance(p, q));
  CHECK(brute_urn_tv(2, 1, 1) == Rational(1, 2));
  CHECK(brute_urn_tv(1, 3, 4) == 0);
}

TEST_CASE("gaussian total variation from CDFs") {
  // equal variances: 2 Phi(1/2) - 1
  CHECK(gaussian_tv_cdf(0, 1, 1, 1) == doctest::Approx(0.382924922548026).epsilon(1e-9));
  CHECK(gaussian_tv_cdf(0, 1, 0, 1) == doctest::Approx(0.0));
  CHECK(gaussian_tv_cdf(0, 1, 0, 2) == doctest::Approx(gaussian_tv_numeric(0, 1, 0, 2)).epsilon(1e-6));
}

TEST_CASE("brute non-expansive maps") {
  CHECK(enumerate_nonexpansive(timed_space(1), timed_space(2)).size() == 7);
  CHECK(enumerate_nonexpansive(point_space(), timed_space(4)).size() == 5);
  CHECK_THROWS_AS(enumerate_nonexpansive(timed_space(9), timed_space(9), 1000), GuardExceeded);
}

TEST_CASE("report formatting") {
  OracleReport r{"perm", "n=3", "6", "6", true};
  CHECK(to_string(r).find("PASS") != std::string::npos);
  r.verdict = false;
  CHECK(to_string(r).find("FAIL") != std::string::npos);
}
