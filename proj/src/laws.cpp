#include "gvlam/laws.hpp"

#include <omp.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "gvlam/error.hpp"

namespace gvlam {

Obj Obj::base_space(std::size_t i) {
  Obj o;
  o.kind = Kind::base;
  o.base = i;
  return o;
}
Obj Obj::unit() { return Obj(); }
Obj Obj::E(std::uint64_t r, Obj a) {
  Obj o;
  o.kind = Kind::e;
  o.grade = r;
  o.kids = {std::move(a)};
  return o;
}
Obj Obj::tensor(Obj a, Obj b) {
  Obj o;
  o.kind = Kind::tensor;
  o.kids = {std::move(a), std::move(b)};
  return o;
}

std::string to_string(const Obj& o) {
  switch (o.kind) {
    case Obj::Kind::base: return "X" + std::to_string(o.base);
    case Obj::Kind::unit: return "I";
    case Obj::Kind::e: return "E" + std::to_string(o.grade) + "(" + to_string(o.kids[0]) + ")";
    case Obj::Kind::tensor: return "(" + to_string(o.kids[0]) + " x " + to_string(o.kids[1]) + ")";
  }
  return "?";
}

ObjSpace::ObjSpace(const std::vector<const FinMetSpace*>& bases, Obj obj) : bases_(bases), obj_(std::move(obj)) {
  points_ = enumerate(obj_);
}

std::vector<Value> ObjSpace::enumerate(const Obj& o) const {
  switch (o.kind) {
    case Obj::Kind::base: {
      std::vector<Value> out;
      for (std::size_t i = 0; i < bases_.at(o.base)->size(); ++i) out.push_back(Value::atom(i));
      return out;
    }
    case Obj::Kind::unit: return {Value::unit()};
    case Obj::Kind::e:
      if (o.grade == 0) return {Value::unit()};
      return enumerate(o.kids[0]);
    case Obj::Kind::tensor: {
      std::vector<Value> out;
      auto l = enumerate(o.kids[0]);
      auto r = enumerate(o.kids[1]);
      for (auto& a : l)
        for (auto& b : r) out.push_back(Value::pair(a, b));
      return out;
    }
  }
  return {};
}

ExtRational ObjSpace::dist(const Value& a, const Value& b) const { return dist(obj_, a, b); }

ExtRational ObjSpace::dist(const Obj& o, const Value& a, const Value& b) const {
  switch (o.kind) {
    case Obj::Kind::base: return bases_[o.base]->dist(a.index(), b.index());
    case Obj::Kind::unit: return ExtRational(0);
    case Obj::Kind::e: {
      if (o.grade == 0) return ExtRational(0);
      ExtRational d = dist(o.kids[0], a, b);
      if (d == ExtRational(0) || d.is_infinite()) return d;
      return d * Rational(static_cast<unsigned long>(o.grade));
    }
    case Obj::Kind::tensor: return dist(o.kids[0], a.first(), b.first()) + dist(o.kids[1], a.second(), b.second());
  }
  return ExtRational(0);
}

FinMetSpace ObjSpace::materialise() const {
  std::vector<std::vector<ExtRational>> rows(points_.size());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    labels.push_back(to_string(points_[i]));
    for (std::size_t j = 0; j < points_.size(); ++j) rows[i].push_back(dist(points_[i], points_[j]));
  }
  return FinMetSpace::from_matrix(to_string(obj_), rows, labels);
}

FinMetSpace E_space(std::uint64_t r, const FinMetSpace& x) {
  FinMetSpace s = ObjSpace({&x}, Obj::E(r, Obj::base_space(0))).materialise();
  s.name = "E" + std::to_string(r) + "(" + x.name + ")";
  if (r > 0) s.labels = x.labels;
  return s;
}

FinMetSpace dilation(std::uint64_t r, const FinMetSpace& x) {
  FinMetSpace s = x;
  s.name = "Dil" + std::to_string(r) + "(" + x.name + ")";
  for (auto& d : s.d)
    if (!(d == ExtRational(0)) && !d.is_infinite()) d = d * Rational(static_cast<unsigned long>(r));
  return s;
}

std::vector<FinMetSpace> standard_spaces(std::size_t max_size) {
  std::vector<FinMetSpace> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    std::set<std::vector<int>> seen;
    for (std::size_t mask = 0; mask < (std::size_t{1} << edges.size()); ++mask) {
      std::vector<int> m(n * n, 0);
      for (std::size_t e = 0; e < edges.size(); ++e) {
        int v = (mask >> e) & 1 ? 2 : 1;
        m[edges[e].first * n + edges[e].second] = v;
        m[edges[e].second * n + edges[e].first] = v;
      }
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::vector<int> canon;
      do {
        std::vector<int> c(n * n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) c[i * n + j] = m[perm[i] * n + perm[j]];
        if (canon.empty() || c < canon) canon = c;
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (!seen.insert(canon).second) continue;
      std::vector<std::vector<ExtRational>> rows(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rows[i].push_back(ExtRational(static_cast<long>(canon[i * n + j])));
      std::string name = "M" + std::to_string(n) + "_";
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) name += std::to_string(canon[i * n + j]);
      out.push_back(FinMetSpace::from_matrix(name, rows));
    }
  }
  if (max_size >= 4) {
    std::vector<Rational> xs{Rational(0), Rational(1, 2), Rational(2), Rational(3)};
    std::vector<std::vector<ExtRational>> rows(4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) rows[i].push_back(ExtRational(Rational(abs(xs[i] - xs[j]))));
    out.push_back(FinMetSpace::from_matrix("line(0,1/2,2,3)", rows));
  }
  if (max_size >= 2)
    out.push_back(FinMetSpace::from_matrix("far2", {{ExtRational(0), ExtRational::infinity()},
                                                    {ExtRational::infinity(), ExtRational(0)}}));
  return out;
}

namespace {

using Fn = std::function<Value(const Value&)>;

struct Mor {
  Obj src, dst;
  Fn f;
  std::string name;
};

Value collapse(std::uint64_t r, const Value& v) { return r == 0 ? Value::unit() : v; }

Mor id(const Obj& a) { return {a, a, [](const Value& v) { return v; }, "id"}; }
Mor compose(const Mor& g, const Mor& f) {
  return {f.src, g.dst, [g, f](const Value& v) { return g.f(f.f(v)); }, g.name + " . " + f.name};
}
Mor tensor(const Mor& f, const Mor& g) {
  return {Obj::tensor(f.src, g.src), Obj::tensor(f.dst, g.dst),
          [f, g](const Value& v) { return Value::pair(f.f(v.first()), g.f(v.second())); },
          "(" + f.name + " x " + g.name + ")"};
}
Mor functor(std::uint64_t r, const Mor& f) {
  return {Obj::E(r, f.src), Obj::E(r, f.dst), [r, f](const Value& v) { return r == 0 ? Value::unit() : f.f(v); },
          "E" + std::to_string(r) + "(" + f.name + ")"};
}
Mor eps(const Obj& a) { return {Obj::E(1, a), a, [](const Value& v) { return v; }, "eps"}; }
Mor delta(std::uint64_t r, std::uint64_t s, const Obj& a) {
  return {Obj::E(r * s, a), Obj::E(r, Obj::E(s, a)),
          [r, s](const Value& v) { return r == 0 || s == 0 ? Value::unit() : v; },
          "delta^{" + std::to_string(r) + "," + std::to_string(s) + "}"};
}
Mor counit_e(const Obj& a) { return {Obj::E(0, a), Obj::unit(), [](const Value&) { return Value::unit(); }, "e"}; }
Mor comult_d(std::uint64_t m, std::uint64_t n, const Obj& a) {
  return {Obj::E(m + n, a), Obj::tensor(Obj::E(m, a), Obj::E(n, a)),
          [m, n](const Value& v) { return Value::pair(collapse(m, v), collapse(n, v)); },
          "d^{" + std::to_string(m) + "," + std::to_string(n) + "}"};
}
Mor phi(std::uint64_t r, const Obj& a, const Obj& b) {
  return {Obj::tensor(Obj::E(r, a), Obj::E(r, b)), Obj::E(r, Obj::tensor(a, b)),
          [r](const Value& v) { return r == 0 ? Value::unit() : v; }, "phi^" + std::to_string(r)};
}
Mor phi0(std::uint64_t r) {
  return {Obj::unit(), Obj::E(r, Obj::unit()), [](const Value&) { return Value::unit(); }, "phi0^" + std::to_string(r)};
}
Mor gamma(const Obj& a, const Obj& b) {
  return {Obj::tensor(a, b), Obj::tensor(b, a), [](const Value& v) { return Value::pair(v.second(), v.first()); },
          "gamma"};
}
Mor alpha(const Obj& a, const Obj& b, const Obj& c) {
  return {Obj::tensor(Obj::tensor(a, b), c), Obj::tensor(a, Obj::tensor(b, c)),
          [](const Value& v) { return Value::pair(v.first().first(), Value::pair(v.first().second(), v.second())); },
          "alpha"};
}
Mor lambda_inv(const Obj& a) {
  return {a, Obj::tensor(Obj::unit(), a), [](const Value& v) { return Value::pair(Value::unit(), v); }, "lambda^-1"};
}
Mor rho_inv(const Obj& a) {
  return {a, Obj::tensor(a, Obj::unit()), [](const Value& v) { return Value::pair(v, Value::unit()); }, "rho^-1"};
}

class Checker {
 public:
  Checker(std::vector<const FinMetSpace*> bases, std::string where) : bases_(std::move(bases)), where_(std::move(where)) {}

  // Both paths must be well-defined non-expansive maps and agree pointwise.
  void diagram(const std::string& law, const std::vector<Mor>& parts, const Mor& lhs, const Mor& rhs) {
    ++checks;
    for (auto& p : parts) nonexpansive(law, p);
    if (to_string(lhs.src) != to_string(rhs.src) || to_string(lhs.dst) != to_string(rhs.dst)) {
      fail(law, "paths have different shapes " + to_string(lhs.src) + " -> " + to_string(lhs.dst) + " vs " +
                    to_string(rhs.src) + " -> " + to_string(rhs.dst));
      return;
    }
    const ObjSpace& s = space(lhs.src);
    for (auto& v : s.points())
      if (!(lhs.f(v) == rhs.f(v))) {
        fail(law, "paths differ at " + to_string(v) + ": " + to_string(lhs.f(v)) + " vs " + to_string(rhs.f(v)));
        return;
      }
  }

  void nonexpansive(const std::string& law, const Mor& m) {
    std::string key = m.name + ":" + to_string(m.src) + "->" + to_string(m.dst);
    if (!checked_.insert(key).second) return;
    const ObjSpace& s = space(m.src);
    const ObjSpace& t = space(m.dst);
    std::set<Value> targets(t.points().begin(), t.points().end());
    std::vector<Value> img;
    for (auto& v : s.points()) {
      img.push_back(m.f(v));
      if (!targets.count(img.back())) {
        fail(law, m.name + " sends " + to_string(v) + " outside " + to_string(m.dst));
        return;
      }
    }
    for (std::size_t i = 0; i < img.size(); ++i)
      for (std::size_t j = 0; j < img.size(); ++j)
        if (t.dist(img[i], img[j]) > s.dist(s.points()[i], s.points()[j])) {
          fail(law, m.name + " : " + to_string(m.src) + " -> " + to_string(m.dst) + " is not non-expansive");
          return;
        }
  }

  std::size_t checks = 0;
  std::vector<std::string> failures;

 private:
  void fail(const std::string& law, const std::string& msg) { failures.push_back(where_ + ": " + law + ": " + msg); }

  const ObjSpace& space(const Obj& o) {
    std::string k = to_string(o);
    auto it = spaces_.find(k);
    if (it == spaces_.end()) it = spaces_.emplace(k, ObjSpace(bases_, o)).first;
    return it->second;
  }

  std::vector<const FinMetSpace*> bases_;
  std::string where_;
  std::map<std::string, ObjSpace> spaces_;
  std::set<std::string> checked_;
};

void single_space_laws(Checker& c, const std::vector<std::uint64_t>& G) {
  Obj X = Obj::base_space(0);
  for (auto s : G) {
    auto ss = std::to_string(s);
    c.diagram("counit-left s=" + ss, {delta(s, 1, X), functor(s, eps(X))}, compose(functor(s, eps(X)), delta(s, 1, X)),
              id(Obj::E(s, X)));
    c.diagram("counit-right s=" + ss, {delta(1, s, X), eps(Obj::E(s, X))}, compose(eps(Obj::E(s, X)), delta(1, s, X)),
              id(Obj::E(s, X)));
    c.diagram("comonoid e", {counit_e(X)}, counit_e(X), counit_e(X));
  }
  for (auto a : G)
    for (auto b : G)
      for (auto d : G) {
        std::string g = " " + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(d);
        Mor l = compose(functor(a, delta(b, d, X)), delta(a, b * d, X));
        Mor r = compose(delta(a, b, Obj::E(d, X)), delta(a * b, d, X));
        c.diagram("coassociativity" + g, {delta(a, b * d, X), delta(b, d, X), delta(a, b, Obj::E(d, X)), delta(a * b, d, X)},
                  l, r);
        // comonoid associativity
        Mor la = compose(alpha(Obj::E(a, X), Obj::E(b, X), Obj::E(d, X)),
                         compose(tensor(comult_d(a, b, X), id(Obj::E(d, X))), comult_d(a + b, d, X)));
        Mor ra = compose(tensor(id(Obj::E(a, X)), comult_d(b, d, X)), comult_d(a, b + d, X));
        c.diagram("comonoid associativity" + g, {comult_d(a, b, X), comult_d(a + b, d, X), comult_d(b, d, X), comult_d(a, b + d, X)},
                  la, ra);
      }
  for (auto m : G) {
    auto ms = std::to_string(m);
    c.diagram("comonoid counit-left m=" + ms, {comult_d(0, m, X)},
              compose(tensor(counit_e(X), id(Obj::E(m, X))), comult_d(0, m, X)), lambda_inv(Obj::E(m, X)));
    c.diagram("comonoid counit-right m=" + ms, {comult_d(m, 0, X)},
              compose(tensor(id(Obj::E(m, X)), counit_e(X)), comult_d(m, 0, X)), rho_inv(Obj::E(m, X)));
    for (auto n : G) {
      auto g = " " + ms + "," + std::to_string(n);
      c.diagram("comonoid commutativity" + g, {comult_d(m, n, X), comult_d(n, m, X)},
                compose(gamma(Obj::E(m, X), Obj::E(n, X)), comult_d(m, n, X)), comult_d(n, m, X));
    }
  }
  for (auto n : G) {
    auto ns = std::to_string(n);
    // n*0 = 0
    c.diagram("interaction e/delta n=" + ns, {delta(n, 0, X), phi0(n)},
              compose(functor(n, counit_e(X)), delta(n, 0, X)), compose(phi0(n), counit_e(X)));
    c.diagram("interaction delta^{0,s}/e s=" + ns, {delta(0, n, X)}, compose(counit_e(Obj::E(n, X)), delta(0, n, X)),
              counit_e(X));
    for (auto m : G)
      for (auto s : G) {
        auto g = " n=" + ns + ",m=" + std::to_string(m) + ",s=" + std::to_string(s);
        Mor l3 = compose(comult_d(n, m, Obj::E(s, X)), delta(n + m, s, X));
        Mor r3 = compose(tensor(delta(n, s, X), delta(m, s, X)), comult_d(n * s, m * s, X));
        c.diagram("interaction d/delta" + g, {delta(n + m, s, X), comult_d(n, m, Obj::E(s, X)), comult_d(n * s, m * s, X)},
                  l3, r3);
        Mor l4 = compose(functor(s, comult_d(n, m, X)), delta(s, n + m, X));
        Mor r4 = compose(phi(s, Obj::E(n, X), Obj::E(m, X)),
                         compose(tensor(delta(s, n, X), delta(s, m, X)), comult_d(s * n, s * m, X)));
        c.diagram("interaction delta/d/phi" + g, {delta(s, n + m, X), phi(s, Obj::E(n, X), Obj::E(m, X))}, l4, r4);
      }
  }
  // Monoidal coherence on X x X x X.
  for (auto r : G) {
    auto rs = " r=" + std::to_string(r);
    Mor l = compose(functor(r, alpha(X, X, X)),
                    compose(phi(r, Obj::tensor(X, X), X), tensor(phi(r, X, X), id(Obj::E(r, X)))));
    Mor rr = compose(phi(r, X, Obj::tensor(X, X)),
                     compose(tensor(id(Obj::E(r, X)), phi(r, X, X)), alpha(Obj::E(r, X), Obj::E(r, X), Obj::E(r, X))));
    c.diagram("phi associativity" + rs, {phi(r, X, X), phi(r, Obj::tensor(X, X), X), phi(r, X, Obj::tensor(X, X))}, l, rr);
    c.diagram("phi symmetry" + rs, {gamma(Obj::E(r, X), Obj::E(r, X))},
              compose(functor(r, gamma(X, X)), phi(r, X, X)), compose(phi(r, X, X), gamma(Obj::E(r, X), Obj::E(r, X))));
  }
}

void pair_laws(Checker& c, const std::vector<std::uint64_t>& G, const std::vector<kernels::Table>& maps) {
  Obj X = Obj::base_space(0);
  Obj Y = Obj::base_space(1);
  for (auto r : G)
    for (auto s : G) {
      auto g = " r=" + std::to_string(r) + ",s=" + std::to_string(s);
      // delta is monoidal.
      Mor l = compose(functor(r, phi(s, X, Y)), compose(phi(r, Obj::E(s, X), Obj::E(s, Y)), tensor(delta(r, s, X), delta(r, s, Y))));
      Mor rr = compose(delta(r, s, Obj::tensor(X, Y)), phi(r * s, X, Y));
      c.diagram("delta monoidal" + g, {phi(s, X, Y), phi(r * s, X, Y), delta(r, s, Obj::tensor(X, Y))}, l, rr);
    }
  for (std::size_t k = 0; k < maps.size(); ++k) {
    const auto& t = maps[k];
    Mor f{X, Y, [t](const Value& v) { return Value::atom(t[v.index()]); }, "f" + std::to_string(k)};
    c.diagram("naturality eps", {f, functor(1, f)}, compose(f, eps(X)), compose(eps(Y), functor(1, f)));
    c.diagram("naturality e", {f}, compose(counit_e(Y), functor(0, f)), counit_e(X));
    for (auto r : G)
      for (auto s : G) {
        auto g = " f" + std::to_string(k) + " r=" + std::to_string(r) + ",s=" + std::to_string(s);
        c.diagram("naturality delta" + g, {functor(r * s, f)}, compose(functor(r, functor(s, f)), delta(r, s, X)),
                  compose(delta(r, s, Y), functor(r * s, f)));
        c.diagram("naturality d" + g, {functor(r + s, f)}, compose(tensor(functor(r, f), functor(s, f)), comult_d(r, s, X)),
                  compose(comult_d(r, s, Y), functor(r + s, f)));
      }
  }
}

}  // namespace

LawReport check_comonad_laws(const std::vector<FinMetSpace>& spaces, const LawOptions& opt) {
  LawReport rep;
  const std::size_t n = spaces.size();
  std::vector<LawReport> per(n * n + n);

  // E_r X is a metric space; agreement with dilation.
  for (auto& x : spaces)
    for (auto r : opt.grades) {
      ++rep.checks;
      FinMetSpace e = E_space(r, x);
      for (auto& v : e.violations(true)) rep.failures.push_back(e.name + ": " + v);
      if (r >= 1) {
        ++rep.checks;
        if (dilation(r, x).d != e.d) rep.failures.push_back("E" + std::to_string(r) + " and Dil" + std::to_string(r) + " differ on " + x.name);
      } else if (x.size() > 1) {
        rep.notes.push_back("E0(" + x.name + ") is the one-point space; Dil0(" + x.name + ") has " +
                            std::to_string(x.size()) + " points at distance 0 and is not separated");
      }
    }

  auto run_single = [&](std::size_t i) {
    Checker c({&spaces[i]}, spaces[i].name);
    single_space_laws(c, opt.grades);
    per[n * n + i].failures = c.failures;
    per[n * n + i].checks = c.checks;
  };
  auto run_pair = [&](std::size_t ij) {
    std::size_t i = ij / n, j = ij % n;
    auto [ix, iy] = kernels::to_int_spaces(spaces[i], spaces[j]);
    auto maps = kernels::enumerate_nonexpansive(ix, iy, opt.guard);
    Checker c({&spaces[i], &spaces[j]}, spaces[i].name + "->" + spaces[j].name);
    if (opt.naturality) pair_laws(c, opt.grades, maps);
    per[ij].failures = c.failures;
    per[ij].checks = c.checks;
    if (opt.lipschitz) {
      auto lr = kernels::lipschitz_sweep(ix, iy, maps, opt.grades, kernels::Exec::serial);
      per[ij].lipschitz_pairs = lr.pairs;
      per[ij].checks += lr.pairs * opt.grades.size();
      for (auto& e : lr.examples)
        per[ij].failures.push_back(spaces[i].name + "->" + spaces[j].name + ": Lipschitz fails for " + e);
    }
  };
  const std::size_t jobs = n * n + n;
  auto run = [&](std::size_t k) {
    if (k < n * n) {
      run_pair(k);
    } else {
      run_single(k - n * n);
    }
  };
  if (opt.exec == kernels::Exec::parallel) {
    std::vector<std::string> errors(jobs);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t k = 0; k < jobs; ++k) {
      try {
        run(k);
      } catch (const std::exception& e) {
        errors[k] = e.what();
      }
    }
    for (auto& e : errors)
      if (!e.empty()) throw ModelError(e);
  } else {
    for (std::size_t k = 0; k < jobs; ++k) run(k);
  }
  for (auto& p : per) {
    rep.checks += p.checks;
    rep.lipschitz_pairs += p.lipschitz_pairs;
    rep.failures.insert(rep.failures.end(), p.failures.begin(), p.failures.end());
  }
  return rep;
}

}  // namespace gvlam
