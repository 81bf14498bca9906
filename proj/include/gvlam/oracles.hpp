#pragma once

// Naive reference implementations for cross-checking the primary code.

#include <string>
#include <vector>

#include "gvlam/metmodel.hpp"
#include "gvlam/prob.hpp"
#include "gvlam/syntax.hpp"

namespace gvlam::oracles {

struct OracleReport {
  std::string oracle;
  std::string inputs;
  std::string computed;
  std::string target;
  bool verdict = false;
};

std::string to_string(const OracleReport& r);

// Every total function X -> Y, kept when non-expansive. Throws GuardExceeded
// when |Y|^|X| exceeds the guard.
std::vector<std::vector<std::size_t>> enumerate_nonexpansive(const FinMetSpace& x, const FinMetSpace& y,
                                                             std::size_t guard = 1000000);

// All permutations of 0..n-1 in lexicographic order; n <= 8.
std::vector<std::vector<std::size_t>> perm_group(std::size_t n);

// Half the L1 distance over the union of supports.
Rational brute_tv(const FinDist& p, const FinDist& q);

// Interleavings of the parts preserving each part's order.
std::vector<Context> brute_interleavings(const std::vector<Context>& parts);

// TV of the two urn samplers from closed-form sequence probabilities.
Rational brute_urn_tv(unsigned k, unsigned m, unsigned n);

// TV of N(mu1, s1^2) and N(mu2, s2^2) from normal CDFs at the density crossings.
double gaussian_tv_cdf(double mu1, double s1, double mu2, double s2);

}  // namespace gvlam::oracles
