#include "gvlam/oracles.hpp"

#include <cmath>
#include <map>

#include "gvlam/error.hpp"

namespace gvlam::oracles {

std::string to_string(const OracleReport& r) {
  return r.oracle + " " + r.inputs + ": computed " + r.computed + ", target " + r.target + " -> " +
         (r.verdict ? "PASS" : "FAIL");
}

std::vector<std::vector<std::size_t>> enumerate_nonexpansive(const FinMetSpace& x, const FinMetSpace& y,
                                                             std::size_t guard) {
  double total = std::pow(static_cast<double>(y.size()), static_cast<double>(x.size()));
  if (total > static_cast<double>(guard))
    throw GuardExceeded("|Y|^|X| = " + std::to_string(static_cast<unsigned long long>(total)) + " exceeds the guard");
  std::vector<std::vector<std::size_t>> out;
  std::size_t count = static_cast<std::size_t>(total);
  for (std::size_t code = 0; code < count; ++code) {
    // code in base |Y|, most significant digit first.
    std::vector<std::size_t> f(x.size());
    std::size_t c = code;
    for (std::size_t i = x.size(); i-- > 0;) {
      f[i] = c % y.size();
      c /= y.size();
    }
    bool ok = true;
    for (std::size_t a = 0; a < x.size() && ok; ++a)
      for (std::size_t b = 0; b < x.size() && ok; ++b) ok = !(y.dist(f[a], f[b]) > x.dist(a, b));
    if (ok) out.push_back(f);
  }
  return out;
}

std::vector<std::vector<std::size_t>> perm_group(std::size_t n) {
  if (n > 8) throw ModelError("perm_group is limited to n <= 8");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur;
  std::vector<bool> used(n, false);
  auto rec = [&](auto& self) -> void {
    if (cur.size() == n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      cur.push_back(i);
      self(self);
      cur.pop_back();
      used[i] = false;
    }
  };
  rec(rec);
  return out;
}

Rational brute_tv(const FinDist& p, const FinDist& q) {
  std::map<std::vector<Rational>, std::pair<Rational, Rational>> joint;
  for (auto& [o, w] : p.entries()) joint[std::vector<Rational>(o.begin(), o.end())].first += w;
  for (auto& [o, w] : q.entries()) joint[std::vector<Rational>(o.begin(), o.end())].second += w;
  Rational sum = 0;
  for (auto& [o, w] : joint) sum += abs(w.first - w.second);
  return sum / 2;
}

std::vector<Context> brute_interleavings(const std::vector<Context>& parts) {
  std::vector<Context> out;
  std::vector<std::size_t> pos(parts.size(), 0);
  std::vector<Binding> cur;
  auto rec = [&](auto& self) -> void {
    bool done = true;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (pos[i] == parts[i].size()) continue;
      done = false;
      cur.push_back(parts[i][pos[i]]);
      ++pos[i];
      self(self);
      --pos[i];
      cur.pop_back();
    }
    if (done) out.emplace_back(cur);
  };
  rec(rec);
  return out;
}

namespace {

Rational falling(unsigned a, unsigned k) {
  Rational r = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (a < i) return 0;
    r *= a - i;
  }
  return r;
}

}  // namespace

Rational brute_urn_tv(unsigned k, unsigned m, unsigned n) {
  if (k == 0 || k > m + n || k > 24) throw ModelError("brute_urn_tv needs 1 <= k <= m+n and k <= 24");
  Rational p1(n, m + n);
  p1.canonicalize();
  Rational p0 = 1 - p1;
  Rational sum = 0;
  // Every sequence with `ones` ones has the same probability under both samplers.
  for (unsigned ones = 0; ones <= k; ++ones) {
    unsigned zeros = k - ones;
    Rational with = 1;
    for (unsigned i = 0; i < ones; ++i) with *= p1;
    for (unsigned i = 0; i < zeros; ++i) with *= p0;
    Rational without = falling(n, ones) * falling(m, zeros) / falling(m + n, k);
    Rational binom = 1;
    for (unsigned i = 0; i < ones; ++i) binom = binom * (k - i) / (i + 1);
    sum += binom * abs(with - without);
  }
  return sum / 2;
}

double gaussian_tv_cdf(double mu1, double s1, double mu2, double s2) {
  auto cdf = [](double x, double mu, double s) { return 0.5 * std::erfc(-(x - mu) / (s * std::sqrt(2.0))); };
  auto logpdf = [](double x, double mu, double s) { return -std::log(s) - (x - mu) * (x - mu) / (2 * s * s); };
  // Crossing points of the two densities: a x^2 + b x + c = 0.
  std::vector<double> cuts;
  double a = 1 / (2 * s2 * s2) - 1 / (2 * s1 * s1);
  double b = mu1 / (s1 * s1) - mu2 / (s2 * s2);
  double c = mu2 * mu2 / (2 * s2 * s2) - mu1 * mu1 / (2 * s1 * s1) + std::log(s2 / s1);
  if (std::fabs(a) < 1e-300) {
    if (std::fabs(b) > 0) cuts.push_back(-c / b);
  } else {
    double disc = b * b - 4 * a * c;
    if (disc > 0) {
      double r1 = (-b - std::sqrt(disc)) / (2 * a);
      double r2 = (-b + std::sqrt(disc)) / (2 * a);
      cuts.push_back(std::min(r1, r2));
      cuts.push_back(std::max(r1, r2));
    }
  }
  // sum over regions where density 1 exceeds density 2 of P1 - P2.
  std::vector<double> edges{-INFINITY};
  edges.insert(edges.end(), cuts.begin(), cuts.end());
  edges.push_back(INFINITY);
  double tv = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i], hi = edges[i + 1];
    double mid = std::isinf(lo) ? (std::isinf(hi) ? 0.0 : hi - 1) : (std::isinf(hi) ? lo + 1 : (lo + hi) / 2);
    if (logpdf(mid, mu1, s1) > logpdf(mid, mu2, s2))
      tv += (cdf(hi, mu1, s1) - cdf(lo, mu1, s1)) - (cdf(hi, mu2, s2) - cdf(lo, mu2, s2));
  }
  return tv;
}

}  // namespace gvlam::oracles
