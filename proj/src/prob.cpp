#include "gvlam/prob.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>

#include "gvlam/error.hpp"

namespace gvlam {

FinDist::FinDist(std::vector<std::pair<Outcome, Rational>> entries) {
  std::map<Outcome, Rational> merged;
  bool first = true;
  for (auto& [o, p] : entries) {
    if (p < 0) throw ModelError("negative probability " + to_string(p));
    if (first) {
      arity_ = o.size();
      first = false;
    } else if (o.size() != arity_) {
      throw ModelError("outcomes of different arity in one distribution");
    }
    merged[o] += p;
  }
  Rational total = 0;
  for (auto& [o, p] : merged) {
    total += p;
    if (p != 0) entries_.emplace_back(o, p);
  }
  if (total != 1) throw ModelError("probabilities sum to " + to_string(total) + ", not 1");
}

FinDist FinDist::point(Outcome o) { return FinDist({{std::move(o), Rational(1)}}); }

Rational FinDist::prob(const Outcome& o) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), o,
                             [](const auto& e, const Outcome& x) { return e.first < x; });
  if (it != entries_.end() && it->first == o) return it->second;
  return 0;
}

std::string to_string(const FinDist& d) {
  std::string out = "{";
  bool first = true;
  for (auto& [o, p] : d.entries()) {
    if (!first) out += ", ";
    first = false;
    out += "(";
    for (std::size_t i = 0; i < o.size(); ++i) out += (i ? "," : "") + to_string(o[i]);
    out += "): " + to_string(p);
  }
  return out + "}";
}

FinDist replace_sampler(unsigned k, unsigned m, unsigned n) {
  if (m + n == 0) throw ModelError("urn is empty (m + n = 0)");
  if (k == 0) throw ModelError("sample count must be at least 1");
  if (k > 24) throw GuardExceeded("replace sampler with k > 24 has too large a support");
  Rational p1(n, m + n);
  p1.canonicalize();
  Rational p0 = 1 - p1;
  std::vector<std::pair<Outcome, Rational>> entries;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Outcome o(k);
    Rational p = 1;
    for (unsigned i = 0; i < k; ++i) {
      bool one = (mask >> (k - 1 - i)) & 1;
      o[i] = one ? 1 : 0;
      p *= one ? p1 : p0;
    }
    entries.emplace_back(std::move(o), p);
  }
  return FinDist(std::move(entries));
}

FinDist no_replace_sampler(unsigned k, unsigned m, unsigned n) {
  if (k > m + n) throw ModelError("cannot draw " + std::to_string(k) + " balls from an urn of " + std::to_string(m + n));
  if (k == 0) throw ModelError("sample count must be at least 1");
  if (k > 24) throw GuardExceeded("no_replace sampler with k > 24 has too large a support");
  std::vector<std::pair<Outcome, Rational>> entries;
  Outcome cur;
  std::function<void(unsigned, unsigned, Rational)> go = [&](unsigned zeros, unsigned ones, Rational p) {
    if (cur.size() == k) {
      entries.emplace_back(cur, p);
      return;
    }
    unsigned left = zeros + ones;
    if (zeros > 0) {
      cur.push_back(0);
      Rational q(zeros, left);
      q.canonicalize();
      go(zeros - 1, ones, p * q);
      cur.pop_back();
    }
    if (ones > 0) {
      cur.push_back(1);
      Rational q(ones, left);
      q.canonicalize();
      go(zeros, ones - 1, p * q);
      cur.pop_back();
    }
  };
  go(m, n, 1);
  return FinDist(std::move(entries));
}

FinDist iid_two_point(unsigned k, const Rational& a, const Rational& b, const Rational& p) {
  if (p < 0 || p > 1) throw ModelError("probability " + to_string(p) + " outside [0,1]");
  if (k == 0) throw ModelError("sample count must be at least 1");
  if (k > 24) throw GuardExceeded("two-point sampler with k > 24 has too large a support");
  std::vector<std::pair<Outcome, Rational>> entries;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    Outcome o(k);
    Rational q = 1;
    for (unsigned i = 0; i < k; ++i) {
      bool hi = (mask >> (k - 1 - i)) & 1;
      o[i] = hi ? b : a;
      q *= hi ? p : Rational(1 - p);
    }
    entries.emplace_back(std::move(o), q);
  }
  return FinDist(std::move(entries));
}

FinDist product(const FinDist& p, const FinDist& q) {
  std::vector<std::pair<Outcome, Rational>> entries;
  for (auto& [a, pa] : p.entries())
    for (auto& [b, qb] : q.entries()) {
      Outcome o = a;
      o.insert(o.end(), b.begin(), b.end());
      entries.emplace_back(std::move(o), pa * qb);
    }
  return FinDist(std::move(entries));
}

FinDist marginal(const FinDist& d, std::size_t i) {
  if (i >= d.arity()) throw ModelError("marginal index out of range");
  std::vector<std::pair<Outcome, Rational>> entries;
  for (auto& [o, p] : d.entries()) entries.push_back({{o[i]}, p});
  return FinDist(std::move(entries));
}

FinDist permute_coordinates(const FinDist& d, const std::vector<std::size_t>& perm) {
  if (perm.size() != d.arity()) throw ModelError("permutation arity mismatch");
  std::vector<std::pair<Outcome, Rational>> entries;
  for (auto& [o, p] : d.entries()) {
    Outcome r(o.size());
    for (std::size_t i = 0; i < o.size(); ++i) r[i] = o[perm[i]];
    entries.emplace_back(std::move(r), p);
  }
  return FinDist(std::move(entries));
}

Rational tv_distance(const FinDist& p, const FinDist& q) {
  if (!p.entries().empty() && !q.entries().empty() && p.arity() != q.arity())
    throw ModelError("total variation between distributions of arity " + std::to_string(p.arity()) + " and " +
                     std::to_string(q.arity()));
  Rational sum = 0;
  auto a = p.entries().begin(), ae = p.entries().end();
  auto b = q.entries().begin(), be = q.entries().end();
  while (a != ae || b != be) {
    if (b == be || (a != ae && a->first < b->first)) {
      sum += a->second;
      ++a;
    } else if (a == ae || b->first < a->first) {
      sum += b->second;
      ++b;
    } else {
      sum += abs(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return sum / 2;
}

DiaconisCheck check_diaconis(unsigned k, unsigned m, unsigned n) {
  if (k == 0 || k > m + n) throw ModelError("Diaconis check needs 1 <= k <= m + n");
  Rational tv = tv_distance(replace_sampler(k, m, n), no_replace_sampler(k, m, n));
  Rational bound(4 * k, m + n);
  bound.canonicalize();
  return {k, m, n, tv, bound, tv <= bound};
}

// ---------------------------------------------------------------------------
// Gaussian bound

namespace {

void check_sigmas(const Rational& s1, const Rational& s2) {
  if (s1 <= 0 || s2 <= 0) throw ModelError("standard deviations must be positive");
}

Rational from_mpfr(const mpfr_t x) {
  if (mpfr_zero_p(x)) return Rational(0);
  mpz_class m;
  mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
  Rational r(m);
  if (e >= 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(e));
    r *= scale;
  } else {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    r /= scale;
  }
  r.canonicalize();
  return r;
}

class Mpfr {
 public:
  explicit Mpfr(int bits) { mpfr_init2(v, bits); }
  ~Mpfr() { mpfr_clear(v); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_t v;
};

std::string phi_form(std::uint64_t k, const Rational& mu1, const Rational& s1, const Rational& mu2,
                     const Rational& s2) {
  return "phi(" + std::to_string(k) + "," + to_string(mu1) + "," + to_string(s1) + "," + to_string(mu2) + "," +
         to_string(s2) + ")";
}

}  // namespace

PhiRadicand phi_radicand(std::uint64_t k, const Rational& mu1, const Rational& s1, const Rational& mu2,
                         const Rational& s2) {
  check_sigmas(s1, s2);
  Rational d = mu1 - mu2;
  Rational a = (s2 * s2 - s1 * s1 + d * d) / (s1 * s1);
  Rational b = (s2 * s2) / (s1 * s1);
  return {Rational(static_cast<unsigned long>(k)), a, b};
}

std::pair<Rational, Rational> gaussian_phi_enclosure(std::uint64_t k, const Rational& mu1, const Rational& s1,
                                                     const Rational& mu2, const Rational& s2, int bits) {
  PhiRadicand r = phi_radicand(k, mu1, s1, mu2, s2);
  Mpfr a_lo(bits), a_hi(bits), b_lo(bits), b_hi(bits), lo(bits), hi(bits), t(bits);
  mpfr_set_q(a_lo.v, r.a.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(a_hi.v, r.a.get_mpq_t(), MPFR_RNDU);
  mpfr_set_q(b_lo.v, r.b.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(b_hi.v, r.b.get_mpq_t(), MPFR_RNDU);
  // lower: a_lo - log(b_hi), upper: a_hi - log(b_lo)
  mpfr_log(t.v, b_hi.v, MPFR_RNDU);
  mpfr_sub(lo.v, a_lo.v, t.v, MPFR_RNDD);
  mpfr_log(t.v, b_lo.v, MPFR_RNDD);
  mpfr_sub(hi.v, a_hi.v, t.v, MPFR_RNDU);
  mpfr_mul_ui(lo.v, lo.v, static_cast<unsigned long>(k), MPFR_RNDD);
  mpfr_mul_ui(hi.v, hi.v, static_cast<unsigned long>(k), MPFR_RNDU);
  if (mpfr_sgn(lo.v) < 0) mpfr_set_zero(lo.v, 1);
  if (mpfr_sgn(hi.v) < 0) throw ModelError("negative radicand in phi");
  mpfr_sqrt(lo.v, lo.v, MPFR_RNDD);
  mpfr_sqrt(hi.v, hi.v, MPFR_RNDU);
  mpfr_div_ui(lo.v, lo.v, 2, MPFR_RNDD);
  mpfr_div_ui(hi.v, hi.v, 2, MPFR_RNDU);
  return {from_mpfr(lo.v), from_mpfr(hi.v)};
}

std::pair<Rational, Rational> scale_by_sqrt(const std::pair<Rational, Rational>& x, std::uint64_t c, int bits) {
  Mpfr lo(bits), hi(bits), s(bits);
  mpfr_set_ui(s.v, static_cast<unsigned long>(c), MPFR_RNDD);
  mpfr_sqrt(s.v, s.v, MPFR_RNDD);
  mpfr_set_q(lo.v, x.first.get_mpq_t(), MPFR_RNDD);
  mpfr_mul(lo.v, lo.v, s.v, MPFR_RNDD);
  mpfr_set_ui(s.v, static_cast<unsigned long>(c), MPFR_RNDU);
  mpfr_sqrt(s.v, s.v, MPFR_RNDU);
  mpfr_set_q(hi.v, x.second.get_mpq_t(), MPFR_RNDU);
  mpfr_mul(hi.v, hi.v, s.v, MPFR_RNDU);
  return {from_mpfr(lo.v), from_mpfr(hi.v)};
}

Magnitude gaussian_phi(std::uint64_t k, const Rational& mu1, const Rational& s1, const Rational& mu2,
                       const Rational& s2) {
  PhiRadicand r = phi_radicand(k, mu1, s1, mu2, s2);
  if (r.b == 1) {
    if (auto root = exact_sqrt(Rational(r.k * r.a))) return Magnitude(Rational(*root / 2));
  }
  auto [lo, hi] = gaussian_phi_enclosure(k, mu1, s1, mu2, s2);
  return Magnitude::irrational(Irrational{phi_form(k, mu1, s1, mu2, s2), lo, hi});
}

namespace {

double normal_pdf(double x, double mu, double s) {
  double z = (x - mu) / s;
  return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * M_PI));
}

double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                   double whole, double eps, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6 * (fa + 4 * flm + fm);
  double right = (b - m) / 6 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15 * eps) return left + right + delta / 15;
  return simpson_rec(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6 * (fa + 4 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 50);
}

}  // namespace

double gaussian_tv_numeric(double mu1, double s1, double mu2, double s2) {
  if (s1 <= 0 || s2 <= 0) throw ModelError("standard deviations must be positive");
  double smax = std::max(s1, s2);
  double lo = std::min(mu1, mu2) - 10 * smax;
  double hi = std::max(mu1, mu2) + 10 * smax;

  // Points where the two densities cross split |f1 - f2| into smooth pieces.
  std::vector<double> cuts = {lo, hi};
  double a = 1 / (2 * s1 * s1) - 1 / (2 * s2 * s2);
  double b = -(mu1 / (s1 * s1) - mu2 / (s2 * s2));
  double c = mu1 * mu1 / (2 * s1 * s1) - mu2 * mu2 / (2 * s2 * s2) + std::log(s1) - std::log(s2);
  if (std::fabs(a) < 1e-300) {
    if (std::fabs(b) > 1e-300) cuts.push_back(-c / b);
  } else {
    double disc = b * b - 4 * a * c;
    if (disc >= 0) {
      double r = std::sqrt(disc);
      cuts.push_back((-b - r) / (2 * a));
      cuts.push_back((-b + r) / (2 * a));
    }
  }
  // A few fixed interior cuts keep the recursion from missing narrow peaks.
  for (int i = 1; i < 16; ++i) cuts.push_back(lo + (hi - lo) * i / 16);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::remove_if(cuts.begin(), cuts.end(), [&](double x) { return x < lo || x > hi; }), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto g = [&](double x) { return std::fabs(normal_pdf(x, mu1, s1) - normal_pdf(x, mu2, s2)); };
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += adaptive_simpson(g, cuts[i], cuts[i + 1], 1e-10);
  return 0.5 * total;
}

double gaussian_tv_equal_variance(double mu1, double mu2, double s) {
  double z = std::fabs(mu1 - mu2) / (2 * s);
  return std::erf(z / std::sqrt(2.0));
}

FinDist walk_endpoint(const FinDist& sign, const FinDist& mag) {
  if (sign.arity() != mag.arity())
    throw ModelError("sign and magnitude laws have arities " + std::to_string(sign.arity()) + " and " +
                     std::to_string(mag.arity()));
  std::vector<std::pair<Outcome, Rational>> entries;
  for (auto& [s, ps] : sign.entries())
    for (auto& [y, py] : mag.entries()) {
      Rational pos = 0;
      for (std::size_t i = 0; i < s.size(); ++i) pos += (2 * s[i] - 1) * y[i];
      entries.push_back({{pos}, ps * py});
    }
  return FinDist(std::move(entries));
}

// ---------------------------------------------------------------------------
// Symmetrisation

namespace {

std::size_t tensor_size(unsigned d, unsigned n) {
  std::size_t size = 1;
  for (unsigned i = 0; i < n; ++i) {
    size *= d;
    if (size > 1000000) throw GuardExceeded("tensor with d^n > 10^6 coefficients");
  }
  return size;
}

std::vector<unsigned> unrank(std::size_t idx, unsigned d, unsigned n) {
  std::vector<unsigned> out(n);
  for (unsigned i = n; i-- > 0;) {
    out[i] = static_cast<unsigned>(idx % d);
    idx /= d;
  }
  return out;
}

std::size_t rank(const std::vector<unsigned>& index, unsigned d) {
  std::size_t idx = 0;
  for (unsigned i : index) idx = idx * d + i;
  return idx;
}

}  // namespace

SymTensor make_tensor(unsigned d, unsigned n) {
  if (d == 0) throw ModelError("tensor dimension must be positive");
  return {d, n, std::vector<Rational>(tensor_size(d, n), Rational(0))};
}

SymTensor basis_tensor(unsigned d, const std::vector<unsigned>& index) {
  SymTensor t = make_tensor(d, static_cast<unsigned>(index.size()));
  for (unsigned i : index)
    if (i >= d) throw ModelError("basis index out of range");
  t.coeffs[rank(index, d)] = 1;
  return t;
}

SymTensor symmetrise(const SymTensor& t) {
  SymTensor out = make_tensor(t.d, t.n);
  std::vector<unsigned> perm(t.n);
  for (unsigned i = 0; i < t.n; ++i) perm[i] = i;
  std::vector<std::vector<unsigned>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));
  Rational count(static_cast<unsigned long>(perms.size()));
  for (std::size_t idx = 0; idx < t.coeffs.size(); ++idx) {
    auto index = unrank(idx, t.d, t.n);
    Rational sum = 0;
    std::vector<unsigned> moved(t.n);
    for (auto& p : perms) {
      for (unsigned i = 0; i < t.n; ++i) moved[i] = index[p[i]];
      sum += t.coeffs[rank(moved, t.d)];
    }
    out.coeffs[idx] = sum / count;
  }
  return out;
}

bool is_symmetric(const SymTensor& t) { return symmetrise(t) == t; }

SymmetrisationReport check_symmetrisation(unsigned d, unsigned n, std::size_t samples, std::uint64_t seed) {
  SymmetrisationReport rep{d, n, samples, true, true, true};
  std::mt19937_64 rng(seed);
  auto random_tensor = [&] {
    SymTensor t = make_tensor(d, n);
    for (auto& c : t.coeffs) {
      long num = static_cast<long>(rng() % 21) - 10;
      unsigned long den = rng() % 6 + 1;
      c = Rational(num, den);
      c.canonicalize();
    }
    return t;
  };
  for (std::size_t s = 0; s < samples; ++s) {
    SymTensor t = random_tensor();
    SymTensor u = random_tensor();
    SymTensor st = symmetrise(t);
    if (!(symmetrise(st) == st)) rep.idempotent = false;
    // The inclusion of symmetric tensors followed by symmetrisation is the identity.
    if (!is_symmetric(st) || !(symmetrise(st) == st)) rep.retraction = false;
    Rational a(static_cast<long>(rng() % 7) - 3, 1), b(static_cast<long>(rng() % 5) + 1, 2);
    b.canonicalize();
    SymTensor comb = make_tensor(d, n);
    for (std::size_t i = 0; i < comb.coeffs.size(); ++i) comb.coeffs[i] = a * t.coeffs[i] + b * u.coeffs[i];
    SymTensor lhs = symmetrise(comb);
    SymTensor su = symmetrise(u);
    for (std::size_t i = 0; i < lhs.coeffs.size(); ++i)
      if (lhs.coeffs[i] != a * st.coeffs[i] + b * su.coeffs[i]) rep.linear = false;
  }
  return rep;
}

}  // namespace gvlam
