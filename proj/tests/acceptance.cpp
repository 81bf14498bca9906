// One PASS/FAIL line per acceptance criterion.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "gvlam/error.hpp"
#include "gvlam/kernels.hpp"
#include "gvlam/laws.hpp"
#include "gvlam/metmodel.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/prob.hpp"
#include "gvlam/vequation.hpp"
#include "support/generators.hpp"

using namespace gvlam;
using testgen::data_path;

namespace {

struct Verdict {
  bool ok = false;
  std::string detail;
};

std::string cli(const std::string& args, int* rc) {
  std::string cmd = std::string(GVLAM_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  if (!p) {
    *rc = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int st = pclose(p);
  *rc = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

std::string q(const std::string& rel) { return "'" + data_path(rel) + "'"; }

QuantaleValue metric(const Rational& r) { return QuantaleValue::metric(Magnitude(r)); }

Theory load(const char* rel) { return load_theory(data_path(rel)); }

ExtRational model_distance(const MetModel& m, const Context& ctx, const Term& a, const Term& b) {
  return hom_distance(m, m.interp(ctx, a), m.interp(ctx, b));
}

// --- 1: eq1 -------------------------------------------------------------

Verdict eq1() {
  Theory th = load("theories/timed.thy");
  Term l = parse_term(read_file(data_path("terms/eq1_lhs.term")));
  Term r = parse_term(read_file(data_path("terms/eq1_rhs.term")));
  auto s = synthesize(th, Context{}, l, r);
  if (!s) return {false, "no bound synthesised"};
  int rc = 0;
  std::string out = cli("bound " + q("theories/timed.thy") + " " + q("terms/eq1_lhs.term") + " " +
                            q("terms/eq1_rhs.term"),
                        &rc);
  MetModel m = MetModel::timed(th, 32);
  ExtRational d = model_distance(m, Context{}, l, r);
  bool ok = s->eq.bound == metric(1) && rc == 0 && out.find("bound: 1\n") != std::string::npos && d == ExtRational(1);
  return {ok, "bound " + bound_report(s->eq) + ", cli rc " + std::to_string(rc) + ", distance " + to_string(d)};
}

// --- 2: promotion ---------------------------------------------------------

Verdict promotion() {
  Theory th = load("theories/timed.thy");
  VEquation e = validate(th, parse_proof(th, read_file(data_path("proofs/promotion.proof"))));
  MetModel m = MetModel::timed(th, 32);
  ExtRational d = model_distance(m, e.ctx, e.lhs, e.rhs);
  bool ok = e.bound == metric(2) && d == ExtRational(2) && e.type == parse_type("!2 (X -o X)");
  return {ok, "bound " + bound_report(e) + ", distance " + to_string(d)};
}

// --- 3: wait axioms -------------------------------------------------------

Verdict wait_axioms() {
  Theory th = load("theories/timed.thy");
  MetModel m = MetModel::timed(th, 32);
  std::size_t n_ok = 0, total = 0;
  auto one = [&](const char* name, const ParamEnv& env) {
    ++total;
    if (check_axiom(m, axiom_instantiate(th, name, env)).ok) ++n_ok;
  };
  one("wait_zero", {});
  for (int n = 0; n <= 10; ++n)
    for (int k = 0; k <= 10; ++k) {
      one("wait_add", {{"n", n}, {"m", k}});
      one("wait", {{"n", n}, {"m", k}});
    }
  return {n_ok == total, std::to_string(n_ok) + "/" + std::to_string(total) + " instances hold"};
}

// --- 4: Diaconis ----------------------------------------------------------

Verdict diaconis() {
  auto rows = kernels::diaconis_sweep(8, kernels::Exec::parallel);
  std::size_t bad = 0;
  Rational tv211 = -1;
  for (auto& r : rows) {
    if (!(r.tv <= Rational(4 * r.k, r.m + r.n))) ++bad;
    if (r.k == 2 && r.m == 1 && r.n == 1) tv211 = r.tv;
  }
  bool ok = bad == 0 && tv211 == Rational(1, 2) && rows.size() == 240;
  return {ok, std::to_string(rows.size()) + " triples, " + std::to_string(bad) + " violations, TV(2,1,1) = " +
                  to_string(tv211)};
}

// --- 5: Gaussian grid -----------------------------------------------------

Verdict gaussian() {
  const Rational mus[] = {-1, 0, 1};
  const Rational sigmas[] = {Rational(1, 2), 1, 2};
  std::size_t cells = 0, bad_tv = 0, bad_scale = 0;
  double worst = 0;
  for (auto& m1 : mus)
    for (auto& s1 : sigmas)
      for (auto& m2 : mus)
        for (auto& s2 : sigmas) {
          ++cells;
          double tv = gaussian_tv_numeric(m1.get_d(), s1.get_d(), m2.get_d(), s2.get_d());
          Magnitude phi1 = gaussian_phi(1, m1, s1, m2, s2);
          if (tv > phi1.upper().get_d() + 1e-6) ++bad_tv;
          auto base = gaussian_phi_enclosure(1, m1, s1, m2, s2);
          for (std::uint64_t k = 2; k <= 4; ++k) {
            auto direct = gaussian_phi_enclosure(k, m1, s1, m2, s2);
            auto scaled = scale_by_sqrt(base, k);
            Rational lo = std::max<Rational>(direct.first, scaled.first);
            Rational hi = std::min<Rational>(direct.second, scaled.second);
            Rational spread = std::max<Rational>(direct.second, scaled.second) - std::min<Rational>(direct.first, scaled.first);
            worst = std::max(worst, spread.get_d());
            if (lo > hi || spread > Rational(1, 1000000000)) ++bad_scale;
          }
        }
  std::ostringstream os;
  os << cells << " cells, " << bad_tv << " TV violations, " << bad_scale << " scaling mismatches, widest " << worst;
  return {cells == 81 && bad_tv == 0 && bad_scale == 0, os.str()};
}

// --- 6: walk --------------------------------------------------------------

Verdict walk() {
  Theory th = load("theories/prob.thy");
  VEquation e = validate(th, parse_proof(th, read_file(data_path("proofs/walk.proof"))));
  const Magnitude& b = e.bound.magnitude();
  double closed = 4.0 * 3 / 4 + std::sqrt(3.0 * (1.0 / 1.0)) / 2;
  bool sym_ok = std::abs(b.lower().get_d() - closed) < 1e-9 && std::abs(b.upper().get_d() - closed) < 1e-9;
  int rc = 0;
  std::string out = cli("prove " + q("theories/prob.thy") + " " + q("proofs/walk.proof"), &rc);
  bool printed = rc == 0 && out.find("bound: 3 + phi(3,0,1,1,1)") != std::string::npos &&
                 out.find("3.866025403") != std::string::npos;

  // discrete magnitudes: exact endpoint laws
  Theory dth = load("theories/prob_discrete.thy");
  VEquation de = validate(dth, parse_proof(dth, read_file(data_path("proofs/walk_discrete.proof"))));
  auto syn = synthesize(dth, de.ctx, de.lhs, de.rhs);
  if (!syn) return {false, "discrete walk: no bound synthesised"};
  FinDist left = walk_endpoint(replace_sampler(2, 5, 5), iid_two_point(2, 1, 2, Rational(1, 2)));
  FinDist right = walk_endpoint(no_replace_sampler(2, 5, 5), iid_two_point(2, 1, 2, Rational(11, 20)));
  Rational tv = tv_distance(left, right);
  const Magnitude& sb = syn->eq.bound.magnitude();
  bool disc_ok = sb.is_rational() && sb.exact_part() == Rational(9, 10) && tv <= sb.exact_part();
  return {sym_ok && printed && disc_ok, "bound " + bound_report(e) + (printed ? ", printed" : ", cli output mismatch") +
                                            "; discrete TV " + to_string(tv) + " <= synthesised " +
                                            bound_report(syn->eq)};
}

// --- 7: typing metatheory -------------------------------------------------

Verdict metatheory() {
  const Signature& sig = testgen::timed_max_theory().sig;
  std::size_t n = 0, round = 0, exch = 0, sub = 0, lin = 0, exch_tried = 0, sub_tried = 0;
  for (std::uint64_t seed = 0; n < 500; ++seed) {
    testgen::TermGen g(seed);
    auto r = g.random_term();
    ++n;
    Derivation d = infer(sig, r.ctx, r.term);
    Derivation back = infer(sig, parse_context(to_string(r.ctx)), parse_term(to_string(r.term)));
    if (same_derivation(d, back) && d.concl.type == r.type) ++round;
    auto counts = free_var_counts(r.term);
    bool linear = counts.size() == r.ctx.size();
    for (auto& b : r.ctx.bindings()) linear = linear && counts[b.name] == 1;
    if (linear) ++lin;
    if (r.ctx.size() >= 2) {
      ++exch_tried;
      bool all = true;
      for (std::size_t i = 0; i + 1 < r.ctx.size(); ++i) {
        Derivation e = exchange(d, i);
        all = all && same_derivation(e, infer(sig, e.concl.ctx, e.concl.term)) && e.concl.type == d.concl.type;
      }
      if (all) ++exch;
    }
    if (!r.ctx.empty()) {
      ++sub_tried;
      testgen::TermGen h(seed + 100000);
      auto w = h.term_of(r.ctx.bindings().back().type);
      Derivation e = infer(sig, w.ctx, w.term);
      Derivation s = subst_derivation(d, e);
      auto sc = free_var_counts(s.concl.term);
      bool ok = same_derivation(s, infer(sig, s.concl.ctx, s.concl.term)) && s.concl.type == d.concl.type &&
                s.concl.ctx.size() == r.ctx.size() - 1 + w.ctx.size() && sc.size() == s.concl.ctx.size();
      if (ok) ++sub;
    }
  }
  std::ostringstream os;
  os << n << " derivations: round-trip " << round << ", linear " << lin << ", exchange " << exch << "/" << exch_tried
     << ", substitution " << sub << "/" << sub_tried;
  return {round == n && lin == n && exch == exch_tried && sub == sub_tried && exch_tried > 0 && sub_tried > 0, os.str()};
}

// --- 8: rewrite schemata preserve denotations ------------------------------

Verdict schemata() {
  const Theory& th = testgen::timed_max_theory();
  MetModel m = MetModel::timed(th, 2);
  std::size_t schemas = 0, weak = 0, mismatches = 0, instances = 0;
  std::string first_bad;
  for (auto s : all_schemas()) {
    ++schemas;
    int done = 0;
    for (std::uint64_t seed = 0; done < 20 && seed < 2000; ++seed) {
      testgen::TermGen g(seed * 7919 + static_cast<std::uint64_t>(s), 2);
      auto in = g.instance(s);
      std::size_t pts = 1;
      for (auto& b : in.ctx.bindings()) pts *= m.points(b.type).size();
      if (pts > 1000) continue;
      Derivation d = infer(th.sig, in.ctx, in.term);
      Derivation r = apply_step(th.sig, d, in.step);
      ++instances;
      if (!(r.concl.type == d.concl.type) || m.interp(d).table != m.interp(r).table) {
        ++mismatches;
        if (first_bad.empty()) first_bad = schema_name(s);
      }
      ++done;
    }
    if (done < 20) ++weak;
  }
  std::ostringstream os;
  os << schemas << " schemata, " << instances << " instances, " << mismatches << " mismatches";
  if (weak) os << ", " << weak << " schemata under 20 instances";
  if (!first_bad.empty()) os << ", first bad " << first_bad;
  return {mismatches == 0 && weak == 0 && schemas == all_schemas().size(), os.str()};
}

// --- 9: comonad laws -------------------------------------------------------

Verdict laws() {
  LawOptions opt;
  opt.grades = {0, 1, 2, 3, 4};
  LawReport r = check_comonad_laws(standard_spaces(4), opt);
  std::ostringstream os;
  os << r.checks << " checks, " << r.lipschitz_pairs << " Lipschitz pairs, " << r.failures.size() << " failures";
  if (!r.failures.empty()) os << ": " << r.failures.front();
  return {r.ok() && r.checks > 0, os.str()};
}

// --- 10: soundness ----------------------------------------------------------

Verdict soundness() {
  const Theory& th = testgen::timed_max_theory();
  MetModel m = MetModel::timed(th, 8);
  std::size_t checked = 0, violations = 0, skipped = 0;
  for (std::uint64_t seed = 0; checked < 120 && seed < 1000; ++seed) {
    testgen::ProofGen g(seed);
    VEquation e = validate(th, g.proof(3));
    if (e.ctx.size() > 3) {
      ++skipped;
      continue;
    }
    ExtRational d = model_distance(m, e.ctx, e.lhs, e.rhs);
    ++checked;
    if (!within_bound(d, e.bound)) ++violations;
  }
  std::ostringstream os;
  os << checked << " equations, " << violations << " violations, " << skipped << " skipped for size";
  return {checked >= 100 && violations == 0, os.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    double limit;  // seconds; 0 means none
    std::function<Verdict()> run;
  };
  const Criterion all[] = {
      {1, 1, eq1},        {2, 1, promotion},   {3, 5, wait_axioms}, {4, 10, diaconis}, {5, 30, gaussian},
      {6, 30, walk},      {7, 30, metatheory}, {8, 60, schemata},   {9, 60, laws},     {10, 0, soundness},
  };
  int failed = 0;
  for (auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit == 0 || secs < c.limit;
    bool pass = o.ok && in_time;
    if (!pass) ++failed;
    std::ostringstream line;
    line.precision(3);
    line << std::fixed << (pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << o.detail << " [" << secs
         << " s";
    if (c.limit > 0) line << " / limit " << c.limit << " s";
    line << "]";
    if (!in_time) line << " too slow";
    std::cout << line.str() << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
