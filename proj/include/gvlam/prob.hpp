#pragma once

// Finite-support probability: urn samplers, exact total variation, the
// Gaussian bound phi, the walk endpoint law, and symmetrisation of tensors.

#include <cstdint>
#include <utility>
#include <vector>

#include "gvlam/quantale.hpp"
#include "gvlam/rational.hpp"

namespace gvlam {

using Outcome = std::vector<Rational>;

// Distribution with finite support; entries sorted by outcome, probabilities
// positive and summing to exactly 1.
class FinDist {
 public:
  FinDist() = default;
  // Merges repeated outcomes and drops zero-probability ones.
  explicit FinDist(std::vector<std::pair<Outcome, Rational>> entries);
  static FinDist point(Outcome o);

  const std::vector<std::pair<Outcome, Rational>>& entries() const { return entries_; }
  std::size_t arity() const { return arity_; }
  Rational prob(const Outcome& o) const;

  friend bool operator==(const FinDist&, const FinDist&) = default;

 private:
  std::vector<std::pair<Outcome, Rational>> entries_;
  std::size_t arity_ = 0;
};

std::string to_string(const FinDist& d);

// k draws with replacement from an urn of m zeros and n ones.
FinDist replace_sampler(unsigned k, unsigned m, unsigned n);
// k draws without replacement; requires k <= m + n.
FinDist no_replace_sampler(unsigned k, unsigned m, unsigned n);
// k i.i.d. draws from {a, b} with P(b) = p.
FinDist iid_two_point(unsigned k, const Rational& a, const Rational& b, const Rational& p);
FinDist product(const FinDist& p, const FinDist& q);
// Marginal of coordinate i.
FinDist marginal(const FinDist& d, std::size_t i);
FinDist permute_coordinates(const FinDist& d, const std::vector<std::size_t>& perm);

Rational tv_distance(const FinDist& p, const FinDist& q);

struct DiaconisCheck {
  unsigned k, m, n;
  Rational tv;
  Rational bound;
  bool ok;
};
DiaconisCheck check_diaconis(unsigned k, unsigned m, unsigned n);

// Radicand of phi written as k*a - k*log(b), with a, b exact.
struct PhiRadicand {
  Rational k;
  Rational a;
  Rational b;
  friend bool operator==(const PhiRadicand&, const PhiRadicand&) = default;
};
PhiRadicand phi_radicand(std::uint64_t k, const Rational& mu1, const Rational& s1, const Rational& mu2,
                         const Rational& s2);

// phi = (1/2) sqrt(k ((s2^2 - s1^2 + (mu1-mu2)^2)/s1^2 - log(s2^2/s1^2))).
// Exact when the value is rational, otherwise a symbolic atom with an
// enclosure of width below 1e-30.
Magnitude gaussian_phi(std::uint64_t k, const Rational& mu1, const Rational& s1, const Rational& mu2,
                       const Rational& s2);
// Rigorous enclosure of phi computed with `bits` of working precision.
std::pair<Rational, Rational> gaussian_phi_enclosure(std::uint64_t k, const Rational& mu1, const Rational& s1,
                                                     const Rational& mu2, const Rational& s2, int bits = 256);
// Rigorous enclosure of sqrt(c) * x for an enclosure [lo, hi] of x.
std::pair<Rational, Rational> scale_by_sqrt(const std::pair<Rational, Rational>& x, std::uint64_t c, int bits = 256);

// (1/2) integral |f1 - f2| for two normal densities, absolute error <= 1e-6.
double gaussian_tv_numeric(double mu1, double s1, double mu2, double s2);
// Closed form 2 Phi(|mu1-mu2| / (2 s)) - 1 for equal variances.
double gaussian_tv_equal_variance(double mu1, double mu2, double s);

// Law of sum_i (2 s_i - 1) y_i under the product of the sign and magnitude laws.
FinDist walk_endpoint(const FinDist& sign, const FinDist& mag);

// Coefficient array over {0..d-1}^n, index tuples in lexicographic order.
struct SymTensor {
  unsigned d = 0;
  unsigned n = 0;
  std::vector<Rational> coeffs;
  friend bool operator==(const SymTensor&, const SymTensor&) = default;
};

SymTensor make_tensor(unsigned d, unsigned n);
SymTensor basis_tensor(unsigned d, const std::vector<unsigned>& index);
SymTensor symmetrise(const SymTensor& t);
bool is_symmetric(const SymTensor& t);

struct SymmetrisationReport {
  unsigned d, n;
  std::size_t samples;
  bool idempotent;
  bool retraction;
  bool linear;
  bool ok() const { return idempotent && retraction && linear; }
};
// Checks idempotence, identity on symmetric tensors, and linearity over
// `samples` pseudo-random rational tensors derived from `seed`.
SymmetrisationReport check_symmetrisation(unsigned d, unsigned n, std::size_t samples = 20, std::uint64_t seed = 1);

}  // namespace gvlam
