#include "gvlam/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <array>
#include <functional>

#include "gvlam/error.hpp"

namespace gvlam::kernels {

int max_threads() { return omp_get_max_threads(); }

std::vector<DiaconisRow> diaconis_sweep(unsigned max_total, Exec exec) {
  std::vector<std::array<unsigned, 3>> jobs;
  for (unsigned k = 1; k <= max_total; ++k)
    for (unsigned m = 0; m <= max_total; ++m)
      for (unsigned n = 0; m + n <= max_total; ++n)
        if (k <= m + n) jobs.push_back({k, m, n});
  std::vector<DiaconisRow> rows(jobs.size());
  auto one = [&](std::size_t i) {
    auto [k, m, n] = jobs[i];
    DiaconisCheck c = check_diaconis(k, m, n);
    rows[i] = DiaconisRow{k, m, n, c.tv, c.bound, c.ok};
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < jobs.size(); ++i) one(i);
  } else {
    for (std::size_t i = 0; i < jobs.size(); ++i) one(i);
  }
  return rows;
}

std::pair<IntSpace, IntSpace> to_int_spaces(const FinMetSpace& x, const FinMetSpace& y, Rational* scale) {
  mpz_class l = 1;
  for (auto* s : {&x, &y})
    for (auto& e : s->d)
      if (!e.is_infinite()) l = lcm(l, mpz_class(e.value().get_den()));
  auto conv = [&](const FinMetSpace& s) {
    IntSpace out;
    out.n = s.size();
    for (auto& e : s.d) {
      if (e.is_infinite()) {
        out.d.push_back(IntSpace::inf);
        continue;
      }
      Rational v = e.value() * Rational(l);
      if (!v.get_den().fits_ulong_p() || v.get_den() != 1 || !v.get_num().fits_slong_p() ||
          v.get_num() >= IntSpace::inf / 64)
        throw ModelError("distance " + to_string(e) + " is too large for the integer kernels");
      out.d.push_back(v.get_num().get_si());
    }
    return out;
  };
  if (scale) *scale = Rational(l);
  return {conv(x), conv(y)};
}

bool is_nonexpansive(const IntSpace& x, const IntSpace& y, const Table& f) {
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t j = 0; j < x.n; ++j)
      if (y.at(f[i], f[j]) > x.at(i, j)) return false;
  return true;
}

std::vector<Table> enumerate_nonexpansive(const IntSpace& x, const IntSpace& y, std::size_t guard) {
  if (y.n > 255) throw ModelError("codomain too large for table enumeration");
  std::vector<Table> out;
  Table cur(x.n, 0);
  std::size_t visited = 0;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (++visited > guard) throw GuardExceeded("non-expansive map enumeration exceeds the guard of " + std::to_string(guard));
    if (i == x.n) {
      out.push_back(cur);
      return;
    }
    for (std::size_t c = 0; c < y.n; ++c) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = y.at(cur[j], c) <= x.at(j, i) && y.at(c, cur[j]) <= x.at(i, j);
      if (!ok) continue;
      cur[i] = static_cast<std::uint8_t>(c);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

namespace {

std::int64_t scaled(std::int64_t d, std::uint64_t r) {
  if (r == 0 || d == 0) return 0;
  if (d >= IntSpace::inf) return IntSpace::inf;
  if (d > IntSpace::inf / static_cast<std::int64_t>(r)) return IntSpace::inf;
  return d * static_cast<std::int64_t>(r);
}

}  // namespace

std::int64_t hom_distance(const IntSpace& y, const Table& f, const Table& g, std::uint64_t r) {
  std::int64_t sup = 0;
  for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, scaled(y.at(f[i], g[i]), r));
  return sup;
}

LipschitzResult lipschitz_sweep(const IntSpace& x, const IntSpace& y, const std::vector<Table>& maps,
                                const std::vector<std::uint64_t>& grades, Exec exec) {
  (void)x;
  const std::size_t n = maps.size();
  std::size_t failures = 0;
  std::vector<std::size_t> bad_index;
  auto row = [&](std::size_t a, std::size_t& local_fail, std::vector<std::size_t>& local_bad) {
    for (std::size_t b = 0; b < n; ++b) {
      std::int64_t h = hom_distance(y, maps[a], maps[b], 1);
      for (auto r : grades) {
        // E_r f and E_r g share their tables; distances in E_r Y are r * d.
        std::int64_t lhs = scaled(h, r);
        std::int64_t rhs = r == 0 ? 0 : hom_distance(y, maps[a], maps[b], r);
        if (lhs > rhs) {
          ++local_fail;
          if (local_bad.size() < 5) local_bad.push_back(a * n + b);
        }
      }
    }
  };
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::size_t lf = 0;
      std::vector<std::size_t> lb;
#pragma omp for schedule(static)
      for (std::size_t a = 0; a < n; ++a) row(a, lf, lb);
#pragma omp critical
      {
        failures += lf;
        bad_index.insert(bad_index.end(), lb.begin(), lb.end());
      }
    }
  } else {
    for (std::size_t a = 0; a < n; ++a) row(a, failures, bad_index);
  }
  std::sort(bad_index.begin(), bad_index.end());
  LipschitzResult res;
  res.pairs = n * n;
  res.failures = failures;
  for (std::size_t i = 0; i < bad_index.size() && i < 5; ++i)
    res.examples.push_back("maps " + std::to_string(bad_index[i] / n) + " and " + std::to_string(bad_index[i] % n));
  return res;
}

ExtRational hom_distance_sweep(const MetModel& m, const MetMap& f, const MetMap& g, Exec exec) {
  if (!(f.ctx == g.ctx) || !(f.cod == g.cod)) throw ModelError("hom_distance: maps have different domains or codomains");
  const std::size_t n = f.table.size();
  if (exec == Exec::serial) return hom_distance(m, f, g);
  int threads = omp_get_max_threads();
  std::vector<ExtRational> partial(static_cast<std::size_t>(threads), ExtRational(0));
#pragma omp parallel
  {
    int t = omp_get_thread_num();
    ExtRational local(0);
#pragma omp for schedule(static)
    for (std::size_t i = 0; i < n; ++i) local = max(local, m.dist(f.cod, f.table[i], g.table[i]));
    partial[static_cast<std::size_t>(t)] = local;
  }
  ExtRational sup(0);
  for (auto& p : partial) sup = max(sup, p);
  return sup;
}

}  // namespace gvlam::kernels
