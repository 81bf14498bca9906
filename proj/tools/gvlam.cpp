// gvlam: typechecking, proof checking, bound synthesis and finite models for
// graded quantitative theories.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "gvlam/kernels.hpp"
#include "gvlam/laws.hpp"
#include "gvlam/metmodel.hpp"
#include "gvlam/oracles.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/prob.hpp"
#include "gvlam/vequation.hpp"

using namespace gvlam;

namespace {

enum Exit : int { ok = 0, type_fail = 1, proof_fail = 2, synth_fail = 3, model_fail = 4, usage = 64, data_fail = 65 };

// A term argument is a file when such a file exists, otherwise term text.
std::string term_arg(const std::string& a) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(a, ec)) return read_file(a);
  return a;
}

std::vector<std::uint64_t> parse_range(const std::string& s) {
  std::vector<std::uint64_t> out;
  auto dots = s.find("..");
  if (dots != std::string::npos) {
    auto lo = std::stoull(s.substr(0, dots)), hi = std::stoull(s.substr(dots + 2));
    for (auto g = lo; g <= hi; ++g) out.push_back(g);
    return out;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stoull(part));
  return out;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& os, bool csv) const {
    if (csv) {
      auto line = [&](const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
      };
      line(header);
      for (auto& r : rows) line(r);
      return;
    }
    std::vector<std::size_t> w(header.size());
    for (std::size_t i = 0; i < header.size(); ++i) w[i] = header[i].size();
    for (auto& r : rows)
      for (std::size_t i = 0; i < r.size(); ++i) w[i] = std::max(w[i], r[i].size());
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t i = 0; i < r.size(); ++i)
        os << (i ? "  " : "") << std::left << std::setw(static_cast<int>(w[i])) << r[i];
      os << "\n";
    };
    line(header);
    for (auto& r : rows) line(r);
  }
};

std::string fmt_double(double x, int prec = 12) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

struct Common {
  std::string theory;
  std::string context;
  std::string format = "text";
  bool csv() const { return format == "csv"; }
};

int cmd_check(const Common& c, const std::string& term, bool emit) {
  Theory th = load_theory(c.theory);
  Derivation d = infer(th.sig, parse_context(c.context), parse_term(term_arg(term)));
  std::cout << to_string(d.concl) << "\n";
  if (emit) std::cout << to_sexpr(d) << "\n";
  return ok;
}

int cmd_prove(const Common& c, const std::string& proof_file, bool annotated) {
  Theory th = load_theory(c.theory);
  VProof p = parse_proof(th, read_file(proof_file));
  VEquation e = validate(th, p);
  std::cout << to_string(e) << "\n";
  std::cout << "bound: " << bound_report(e) << "\n";
  if (annotated) std::cout << to_string(annotate(th, p)) << "\n";
  return ok;
}

int cmd_bound(const Common& c, const std::string& a, const std::string& b, bool normalize, bool emit) {
  Theory th = load_theory(c.theory);
  SynthOptions opt;
  opt.normalize_first = normalize;
  auto r = synthesize(th, parse_context(c.context), parse_term(term_arg(a)), parse_term(term_arg(b)), opt);
  if (!r) {
    std::cout << "FAIL: no derivation found\n";
    return synth_fail;
  }
  validate(th, r->proof);
  std::cout << to_string(r->eq) << "\n";
  std::cout << "bound: " << bound_report(r->eq) << "\n";
  if (emit) std::cout << to_string(r->proof) << "\n";
  return ok;
}

MetModel load_model(const Theory& th, const std::string& spec) {
  MetModel m = MetModel::from_spec(th, spec);
  m.set_guard(default_guard());
  return m;
}

int cmd_model_eval(const Common& c, const std::string& model, const std::string& term) {
  Theory th = load_theory(c.theory);
  MetModel m = load_model(th, model);
  MetMap f = m.interp(parse_context(c.context), parse_term(term_arg(term)));
  Table t{{"point", "value"}, {}};
  for (std::size_t i = 0; i < f.table.size(); ++i) {
    std::string pt = "(";
    for (std::size_t j = 0; j < f.dom[i].size(); ++j) pt += (j ? "," : "") + to_string(f.dom[i][j]);
    t.rows.push_back({pt + ")", to_string(f.table[i])});
  }
  t.print(std::cout, c.csv());
  return ok;
}

int cmd_model_distance(const Common& c, const std::string& model, const std::string& a, const std::string& b) {
  Theory th = load_theory(c.theory);
  MetModel m = load_model(th, model);
  Context ctx = parse_context(c.context);
  MetMap f = m.interp(ctx, parse_term(term_arg(a)));
  MetMap g = m.interp(ctx, parse_term(term_arg(b)));
  std::cout << "distance: " << to_string(kernels::hom_distance_sweep(m, f, g, kernels::Exec::parallel)) << "\n";
  return ok;
}

// Every instance of every axiom with parameters in 0..max (conditions permitting).
int cmd_verify_axioms(const Common& c, const std::string& model, unsigned max) {
  Theory th = load_theory(c.theory);
  MetModel m = load_model(th, model);
  Table t{{"axiom", "params", "distance", "bound", "ok"}, {}};
  bool all = true;
  for (const auto& ax : th.axioms) {
    std::vector<Rational> vals(ax.params.size(), 0);
    while (true) {
      ParamEnv env;
      for (std::size_t i = 0; i < vals.size(); ++i) env[ax.params[i].name] = vals[i];
      if (ax.condition.holds(env)) {
        AxiomInstance inst = axiom_instantiate(th, ax.name, env);
        AxiomCheck r = check_axiom(m, inst);
        all = all && r.ok;
        t.rows.push_back({ax.name, params_to_string(env, ax.params), to_string(r.distance), to_string(inst.bound),
                          r.ok ? "ok" : "VIOLATED"});
      }
      std::size_t i = 0;
      while (i < vals.size() && vals[i] == max) vals[i++] = 0;
      if (i == vals.size()) break;
      vals[i] += 1;
    }
  }
  t.print(std::cout, c.csv());
  std::cout << (all ? "all axioms hold" : "axiom violations found") << " (" << t.rows.size() << " instances)\n";
  return all ? ok : model_fail;
}

int cmd_verify_laws(const std::string& grades, std::size_t max_space, bool serial) {
  LawOptions opt;
  opt.grades = parse_range(grades);
  opt.exec = serial ? kernels::Exec::serial : kernels::Exec::parallel;
  opt.guard = default_guard();
  auto spaces = standard_spaces(max_space);
  LawReport r = check_comonad_laws(spaces, opt);
  std::cout << "spaces: " << spaces.size() << ", checks: " << r.checks << ", lipschitz pairs: " << r.lipschitz_pairs
            << "\n";
  for (auto& n : r.notes) std::cout << "note: " << n << "\n";
  for (auto& f : r.failures) std::cout << "FAIL: " << f << "\n";
  std::cout << (r.ok() ? "no failures" : std::to_string(r.failures.size()) + " failures") << "\n";
  return r.ok() ? ok : model_fail;
}

int cmd_prob_sweep(unsigned max, bool csv) {
  auto rows = kernels::diaconis_sweep(max, kernels::Exec::parallel);
  Table t{{"k", "m", "n", "tv", "bound", "ok"}, {}};
  bool all = true;
  for (auto& r : rows) {
    all = all && r.ok;
    t.rows.push_back({std::to_string(r.k), std::to_string(r.m), std::to_string(r.n), to_string(r.tv),
                      to_string(r.bound), r.ok ? "ok" : "VIOLATED"});
  }
  t.print(std::cout, csv);
  return all ? ok : model_fail;
}

int cmd_gaussian_grid(unsigned max_k, bool csv) {
  const std::vector<Rational> mus{-1, 0, 1};
  const std::vector<Rational> sigmas{Rational(1, 2), 1, 2};
  Table t{{"mu1", "s1", "mu2", "s2", "tv", "phi1_lo", "phi1_hi", "tv_ok", "sqrt_k_ok"}, {}};
  bool all = true;
  for (auto& mu1 : mus)
    for (auto& s1 : sigmas)
      for (auto& mu2 : mus)
        for (auto& s2 : sigmas) {
          double tv = gaussian_tv_numeric(to_double(mu1), to_double(s1), to_double(mu2), to_double(s2));
          auto phi1 = gaussian_phi_enclosure(1, mu1, s1, mu2, s2);
          bool tv_ok = tv <= to_double(phi1.second) + 1e-6;
          bool sq_ok = true;
          for (unsigned k = 2; k <= max_k; ++k) {
            auto pk = gaussian_phi_enclosure(k, mu1, s1, mu2, s2);
            auto scaled = scale_by_sqrt(phi1, k);
            Rational lo = max(ExtRational(pk.first), ExtRational(scaled.first)).value();
            Rational hi = min(ExtRational(pk.second), ExtRational(scaled.second)).value();
            bool overlap = lo <= hi;
            bool narrow = pk.second - pk.first < Rational(1, 1000000000) &&
                          scaled.second - scaled.first < Rational(1, 1000000000);
            sq_ok = sq_ok && overlap && narrow;
          }
          all = all && tv_ok && sq_ok;
          t.rows.push_back({to_string(mu1), to_string(s1), to_string(mu2), to_string(s2), fmt_double(tv),
                            to_decimal(phi1.first, 12), to_decimal(phi1.second, 12), tv_ok ? "ok" : "VIOLATED",
                            sq_ok ? "ok" : "VIOLATED"});
        }
  t.print(std::cout, csv);
  return all ? ok : model_fail;
}

void print_report(const oracles::OracleReport& r) { std::cout << oracles::to_string(r) << "\n"; }

int cmd_oracle_diaconis(unsigned k, unsigned m, unsigned n) {
  Rational brute = oracles::brute_urn_tv(k, m, n);
  DiaconisCheck prim = check_diaconis(k, m, n);
  oracles::OracleReport r{"urn-tv", "k=" + std::to_string(k) + " m=" + std::to_string(m) + " n=" + std::to_string(n),
                          to_string(prim.tv), to_string(brute), brute == prim.tv};
  print_report(r);
  return r.verdict ? ok : model_fail;
}

int cmd_oracle_perm(std::size_t n, bool list) {
  auto ps = oracles::perm_group(n);
  std::cout << "permutations of " << n << ": " << ps.size() << "\n";
  if (list)
    for (auto& p : ps) {
      for (std::size_t i = 0; i < p.size(); ++i) std::cout << (i ? " " : "") << p[i];
      std::cout << "\n";
    }
  return ok;
}

int cmd_oracle_gaussian(double mu1, double s1, double mu2, double s2) {
  double cdf = oracles::gaussian_tv_cdf(mu1, s1, mu2, s2);
  double num = gaussian_tv_numeric(mu1, s1, mu2, s2);
  oracles::OracleReport r{"gaussian-tv",
                          "mu1=" + fmt_double(mu1) + " s1=" + fmt_double(s1) + " mu2=" + fmt_double(mu2) +
                              " s2=" + fmt_double(s2),
                          fmt_double(num), fmt_double(cdf), std::abs(cdf - num) <= 1e-6};
  print_report(r);
  return r.verdict ? ok : model_fail;
}

int cmd_oracle_nonexpansive(std::size_t max_space) {
  auto spaces = standard_spaces(max_space);
  std::size_t pairs = 0, agree = 0;
  for (auto& x : spaces)
    for (auto& y : spaces) {
      auto brute = oracles::enumerate_nonexpansive(x, y, default_guard());
      auto [ix, iy] = kernels::to_int_spaces(x, y);
      auto fast = kernels::enumerate_nonexpansive(ix, iy, default_guard());
      bool same = brute.size() == fast.size();
      for (std::size_t i = 0; same && i < brute.size(); ++i)
        for (std::size_t j = 0; same && j < brute[i].size(); ++j) same = brute[i][j] == fast[i][j];
      ++pairs;
      if (same) ++agree;
      else std::cout << "MISMATCH: " << x.name << " -> " << y.name << "\n";
    }
  oracles::OracleReport r{"nonexpansive-maps", std::to_string(spaces.size()) + " spaces",
                          std::to_string(agree) + "/" + std::to_string(pairs) + " pairs agree",
                          std::to_string(pairs) + "/" + std::to_string(pairs), agree == pairs};
  print_report(r);
  return r.verdict ? ok : model_fail;
}

int run_guarded(const std::function<int()>& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return data_fail;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return data_fail;
  } catch (const TypeError& e) {
    std::cerr << "type error: " << e.what() << "\n";
    return type_fail;
  } catch (const ProofError& e) {
    std::cerr << "proof error: " << e.what() << "\n";
    return proof_fail;
  } catch (const RewriteError& e) {
    std::cerr << "proof error: " << e.what() << "\n";
    return proof_fail;
  } catch (const QuantaleError& e) {
    std::cerr << "proof error: " << e.what() << "\n";
    return proof_fail;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return model_fail;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return data_fail;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage: bad number: " << e.what() << "\n";
    return usage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gvlam: graded quantitative equational reasoning"};
  app.require_subcommand(1);
  Common c;
  int rc = ok;
  std::function<int()> action;

  auto add_format = [&](CLI::App* s) {
    s->add_option("--format", c.format, "text or csv")->check(CLI::IsMember({"text", "csv"}));
  };

  // check
  auto* check = app.add_subcommand("check", "typecheck a term");
  std::string term, term2, proof_file, model = "timed(32)";
  bool emit = false, normalize = false, annotated = false, serial = false, list = false;
  check->add_option("theory", c.theory)->required();
  check->add_option("term", term, "term text or file")->required();
  check->add_option("--context,-c", c.context);
  check->add_flag("--emit-derivation", emit);
  check->callback([&] { action = [&] { return cmd_check(c, term, emit); }; });

  auto* prove = app.add_subcommand("prove", "validate a proof script");
  prove->add_option("theory", c.theory)->required();
  prove->add_option("proof", proof_file)->required()->check(CLI::ExistingFile);
  prove->add_flag("--annotate", annotated, "print the proof with every conclusion");
  prove->callback([&] { action = [&] { return cmd_prove(c, proof_file, annotated); }; });

  auto* bound = app.add_subcommand("bound", "synthesize a derivation of lhs =q rhs");
  bound->add_option("theory", c.theory)->required();
  bound->add_option("lhs", term)->required();
  bound->add_option("rhs", term2)->required();
  bound->add_option("--context,-c", c.context);
  bound->add_flag("--normalize-first", normalize);
  bound->add_flag("--emit-proof", emit);
  bound->callback([&] { action = [&] { return cmd_bound(c, term, term2, normalize, emit); }; });

  auto* modelc = app.add_subcommand("model", "finite models");
  modelc->require_subcommand(1);
  auto* eval = modelc->add_subcommand("eval", "tabulate a denotation");
  eval->add_option("theory", c.theory)->required();
  eval->add_option("term", term)->required();
  eval->add_option("--model,-m", model, "timed(N) or a model file");
  eval->add_option("--context,-c", c.context);
  add_format(eval);
  eval->callback([&] { action = [&] { return cmd_model_eval(c, model, term); }; });

  auto* dist = modelc->add_subcommand("distance", "hom distance between two denotations");
  dist->add_option("theory", c.theory)->required();
  dist->add_option("lhs", term)->required();
  dist->add_option("rhs", term2)->required();
  dist->add_option("--model,-m", model);
  dist->add_option("--context,-c", c.context);
  dist->callback([&] { action = [&] { return cmd_model_distance(c, model, term, term2); }; });

  unsigned max = 10;
  auto* vax = modelc->add_subcommand("verify-axioms", "check axiom instances in a model");
  vax->add_option("theory", c.theory)->required();
  vax->add_option("--model,-m", model);
  vax->add_option("--max", max, "largest parameter value");
  add_format(vax);
  vax->callback([&] { action = [&] { return cmd_verify_axioms(c, model, max); }; });

  std::string grades = "0..4";
  std::size_t max_space = 4;
  auto* vlaws = modelc->add_subcommand("verify-laws", "comonad and comonoid laws on small spaces");
  vlaws->add_option("--grades", grades, "e.g. 0..4 or 1,2,3");
  vlaws->add_option("--max-space", max_space);
  vlaws->add_flag("--serial", serial);
  vlaws->callback([&] { action = [&] { return cmd_verify_laws(grades, max_space, serial); }; });

  unsigned sweep_max = 8;
  auto* psweep = modelc->add_subcommand("prob-sweep", "urn samplers: exact TV against 4k/(m+n)");
  psweep->add_option("--max", sweep_max, "largest m+n");
  add_format(psweep);
  psweep->callback([&] { action = [&] { return cmd_prob_sweep(sweep_max, c.csv()); }; });

  unsigned max_k = 4;
  auto* ggrid = modelc->add_subcommand("gaussian-grid", "numeric TV of Gaussians against phi");
  ggrid->add_option("--max-k", max_k);
  add_format(ggrid);
  ggrid->callback([&] { action = [&] { return cmd_gaussian_grid(max_k, c.csv()); }; });

  auto* oracle = app.add_subcommand("oracle", "naive reference computations");
  oracle->require_subcommand(1);
  unsigned k = 1, m = 1, n = 1;
  auto* od = oracle->add_subcommand("diaconis", "urn TV by closed form versus the sampler");
  od->add_option("k", k)->required();
  od->add_option("m", m)->required();
  od->add_option("n", n)->required();
  od->callback([&] { action = [&] { return cmd_oracle_diaconis(k, m, n); }; });

  std::size_t pn = 3;
  auto* op = oracle->add_subcommand("perm", "permutation group");
  op->add_option("n", pn)->required()->check(CLI::Range(0, 8));
  op->add_flag("--list", list);
  op->callback([&] { action = [&] { return cmd_oracle_perm(pn, list); }; });

  double mu1 = 0, s1 = 1, mu2 = 0, s2 = 1;
  auto* og = oracle->add_subcommand("gaussian-tv", "TV of two normals from CDFs");
  og->add_option("mu1", mu1)->required();
  og->add_option("s1", s1)->required()->check(CLI::PositiveNumber);
  og->add_option("mu2", mu2)->required();
  og->add_option("s2", s2)->required()->check(CLI::PositiveNumber);
  og->callback([&] { action = [&] { return cmd_oracle_gaussian(mu1, s1, mu2, s2); }; });

  auto* on = oracle->add_subcommand("nonexpansive", "brute-force maps versus the backtracking kernel");
  on->add_option("--max-space", max_space);
  on->callback([&] { action = [&] { return cmd_oracle_nonexpansive(max_space); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }
  if (action) rc = run_guarded(action);
  return rc;
}
