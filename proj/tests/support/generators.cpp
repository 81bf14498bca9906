#include "support/generators.hpp"

#include <algorithm>

#include "gvlam/parser.hpp"

namespace gvlam::testgen {

namespace {

Grade nat(std::uint64_t n) { return Grade::nat(n); }
Type X() { return ground_type("X"); }
Type bang(std::uint64_t r, Type a) { return bang_type(nat(r), std::move(a)); }

std::string wait_sym(int n) { return "wait_" + std::to_string(n); }

}  // namespace

std::string data_path(const std::string& rel) { return std::string(GVLAM_DATA_DIR) + "/" + rel; }

const Theory& timed_max_theory() {
  static const Theory th = load_theory(data_path("theories/timed_max.thy"));
  return th;
}

std::optional<Path> find_var(const Term& t, const std::string& x) {
  if (auto v = t.as<term::Var>()) {
    if (v->name == x) return Path{};
    return std::nullopt;
  }
  auto kids = children(t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto bs = binders_of_child(t, i);
    if (std::find(bs.begin(), bs.end(), x) != bs.end()) continue;
    if (auto p = find_var(kids[i], x)) {
      p->insert(p->begin(), i);
      return p;
    }
  }
  return std::nullopt;
}

// ---- terms

std::string TermGen::fresh(const std::string& base) { return base + std::to_string(++counter_); }

Term TermGen::fresh_var(const Type& t) {
  std::string x = fresh("v");
  vars_.push_back({x, t});
  return var(x);
}

Type TermGen::random_type(int depth) {
  switch (coin(depth > 0 ? 8 : 6)) {
    case 0:
    case 1:
    case 2: return X();
    case 3: return unit_type();
    case 4: return tensor_type(X(), X());
    case 5: return bang(coin(3), X());
    case 6: return lolli_type(coin(2) ? X() : bang(1, X()), X());
    default: return lolli_type(random_type(0), X());
  }
}

Term TermGen::gen(const Type& t, int depth) {
  if (depth <= 0 || coin(5) == 0) return fresh_var(t);
  if (t.as<type::Ground>()) {
    std::vector<Seed> seeds;
    for (int i = coin(3); i > 0; --i) {
      Type a = random_type(1);
      seeds.push_back({gen(a, depth - 1), a});
    }
    return body_x(std::move(seeds), depth);
  }
  if (t.as<type::Unit>()) {
    switch (coin(3)) {
      case 0: return star();
      case 1: return unit_let(gen(unit_type(), depth - 1), star());
      default: return discard(gen(bang(0, X()), depth - 1), star());
    }
  }
  if (auto p = t.as<type::Tensor>()) return tensor_pair(gen(p->left, depth - 1), gen(p->right, depth - 1));
  if (auto l = t.as<type::Lolli>()) {
    if (!l->codomain.as<type::Ground>()) return fresh_var(t);
    std::string y = fresh("y");
    return lambda(y, l->domain, body_x({{var(y), l->domain}}, depth - 1));
  }
  auto b = t.as<type::Bang>();
  if (b->body.as<type::Ground>()) return promote_x(b->grade.value(), depth - 1);
  if (b->body.as<type::Unit>()) return promote(b->grade, {}, {}, {}, star());
  return fresh_var(t);
}

Term TermGen::body_x(std::vector<Seed> seeds, int depth) {
  std::shuffle(seeds.begin(), seeds.end(), rng_);
  auto it = std::find_if(seeds.begin(), seeds.end(), [](const Seed& s) { return !s.ty.as<type::Ground>(); });
  if (it == seeds.end()) {
    std::vector<Term> xs;
    for (auto& s : seeds) xs.push_back(s.t);
    return combine(std::move(xs), depth);
  }
  Seed s = *it;
  seeds.erase(it);
  if (s.ty.as<type::Unit>()) return unit_let(s.t, body_x(std::move(seeds), depth));
  if (auto p = s.ty.as<type::Tensor>()) {
    std::string a = fresh("a"), b = fresh("b");
    seeds.push_back({var(a), p->left});
    seeds.push_back({var(b), p->right});
    return tensor_let(s.t, a, b, body_x(std::move(seeds), depth));
  }
  if (auto l = s.ty.as<type::Lolli>()) {
    seeds.push_back({app(s.t, gen(l->domain, depth - 1)), l->codomain});
    return body_x(std::move(seeds), depth);
  }
  auto b = s.ty.as<type::Bang>();
  std::uint64_t g = b->grade.value();
  if (g == 0) return discard(s.t, body_x(std::move(seeds), depth));
  if (g == 1) {
    seeds.push_back({derelict(s.t), b->body});
    return body_x(std::move(seeds), depth);
  }
  std::uint64_t p = 1 + static_cast<std::uint64_t>(coin(static_cast<int>(g - 1)));
  std::string a = fresh("c"), c = fresh("d");
  seeds.push_back({var(a), bang(p, b->body)});
  seeds.push_back({var(c), bang(g - p, b->body)});
  return copy(nat(p), nat(g - p), s.t, a, c, body_x(std::move(seeds), depth));
}

Term TermGen::combine(std::vector<Term> xs, int depth) {
  if (xs.empty()) xs.push_back(depth > 1 && coin(3) == 0 ? gen(X(), depth - 1) : fresh_var(X()));
  auto wrap = [&](Term t) {
    switch (coin(6)) {
      case 0: return op_app(wait_sym(coin(3)), {t});
      case 1: {
        std::string y = fresh("y");
        return app(lambda(y, X(), op_app(wait_sym(coin(3)), {var(y)})), t);
      }
      default: return t;
    }
  };
  while (xs.size() > 1) {
    std::size_t i = static_cast<std::size_t>(coin(static_cast<int>(xs.size())));
    Term a = xs[i];
    xs.erase(xs.begin() + static_cast<long>(i));
    Term b = xs.back();
    xs.pop_back();
    xs.push_back(wrap(op_app(coin(2) ? "max" : "min", {wrap(a), wrap(b)})));
  }
  return wrap(xs[0]);
}

Term TermGen::promote_x(std::uint64_t r, int depth, std::vector<std::pair<std::string, Grade>> extra,
                        std::vector<Term> extra_args, const std::function<Term()>& body) {
  std::size_t snap = vars_.size();
  Term u = body ? body() : gen(X(), depth);
  // Free variables created for the body become binders.
  std::vector<Binding> inner(vars_.begin() + static_cast<long>(snap), vars_.end());
  vars_.resize(snap);
  std::vector<Grade> gs;
  std::vector<std::string> bs;
  std::vector<Term> args = std::move(extra_args);
  for (auto& [x, g] : extra) {
    bs.push_back(x);
    gs.push_back(g);
  }
  for (auto& b : inner) {
    if (auto bt = b.type.as<type::Bang>()) {
      bs.push_back(b.name);
      gs.push_back(bt->grade);
      args.push_back(gen(bang(r * bt->grade.value(), bt->body), depth - 1));
    } else {
      std::string z = fresh("z");
      u = substitute(u, derelict(var(z)), b.name);
      bs.push_back(z);
      gs.push_back(nat(1));
      args.push_back(gen(bang(r, b.type), depth - 1));
    }
  }
  return promote(nat(r), gs, args, bs, u);
}

Generated TermGen::term_of(const Type& t) {
  vars_.clear();
  Term v = gen(t, depth_);
  std::vector<Binding> bs = vars_;
  std::shuffle(bs.begin(), bs.end(), rng_);
  return {Context(bs), v, t};
}

Generated TermGen::random_term() { return term_of(coin(2) ? X() : random_type(1)); }

TermGen::Instance TermGen::instance(SchemaId s) {
  vars_.clear();
  int d = std::max(1, depth_ - 1);
  auto g3 = [&] { return static_cast<std::uint64_t>(coin(3)); };
  RewriteStep step;
  step.schema = s;
  Term t;
  switch (s) {
    case SchemaId::pm_beta: {
      Type a = random_type(1), b = random_type(1);
      std::string x = fresh("x"), y = fresh("y");
      Term v = gen(a, d), w = gen(b, d);
      t = tensor_let(tensor_pair(v, w), x, y, body_x({{var(x), a}, {var(y), b}}, d));
      break;
    }
    case SchemaId::pm_eta: {
      std::string x = fresh("x"), y = fresh("y");
      Term v = gen(tensor_type(X(), X()), d);
      t = tensor_let(v, x, y, body_x({{tensor_pair(var(x), var(y)), tensor_type(X(), X())}}, d));
      break;
    }
    case SchemaId::unit_beta: t = unit_let(star(), gen(X(), d)); break;
    case SchemaId::unit_eta: {
      std::string p = fresh("p");
      Term u = body_x({{var(p), unit_type()}}, d);
      Path h = *find_var(u, p);
      t = unit_let(gen(unit_type(), d), replace_at(u, h, star()));
      step.bindings.holes = {h};
      break;
    }
    case SchemaId::lam_beta: {
      Type a = random_type(1);
      std::string x = fresh("x");
      Term f = lambda(x, a, body_x({{var(x), a}}, d));
      t = app(f, gen(a, d));
      break;
    }
    case SchemaId::lam_eta: {
      Type a = random_type(0);
      std::string x = fresh("x");
      t = lambda(x, a, app(gen(lolli_type(a, X()), d), var(x)));
      break;
    }
    case SchemaId::dr_beta: t = derelict(promote_x(1, d)); break;
    case SchemaId::dr_eta: {
      std::uint64_t r = g3();
      std::string x = fresh("x");
      t = promote(nat(r), {nat(1)}, {gen(bang(r, X()), d)}, {x}, derelict(var(x)));
      break;
    }
    case SchemaId::pr_assoc: {
      std::uint64_t r1 = 1 + static_cast<std::uint64_t>(coin(2)), r2 = g3();
      Term inner = promote_x(r1 * r2, d);
      std::string a = fresh("a");
      t = promote_x(r1, d, {{a, nat(r2)}}, {inner}, [&] { return body_x({{var(a), bang(r2, X())}}, d); });
      break;
    }
    case SchemaId::pr_swap: {
      std::uint64_t r = g3(), ga = g3(), gb = g3();
      std::string a = fresh("a"), b = fresh("b");
      Term va = gen(bang(r * ga, X()), d), vb = gen(bang(r * gb, X()), d);
      t = promote_x(r, d, {{a, nat(ga)}, {b, nat(gb)}}, {va, vb},
                    [&] { return body_x({{var(a), bang(ga, X())}, {var(b), bang(gb, X())}}, d); });
      step.bindings.index = 0;
      break;
    }
    case SchemaId::cp_unit_left:
    case SchemaId::cp_unit_right: {
      std::uint64_t n = g3();
      std::string x = fresh("x"), y = fresh("y");
      Term v = gen(bang(n, X()), d);
      if (s == SchemaId::cp_unit_left)
        t = copy(nat(0), nat(n), v, x, y, discard(var(x), body_x({{var(y), bang(n, X())}}, d)));
      else
        t = copy(nat(n), nat(0), v, x, y, discard(var(y), body_x({{var(x), bang(n, X())}}, d)));
      break;
    }
    case SchemaId::cp_assoc: {
      std::uint64_t n = g3(), m = g3(), o = g3();
      std::string x = fresh("x"), y = fresh("y"), a = fresh("a"), b = fresh("b");
      Term v = gen(bang(n + m + o, X()), d);
      Term body = body_x({{var(a), bang(n, X())}, {var(b), bang(m, X())}, {var(y), bang(o, X())}}, d);
      t = copy(nat(n + m), nat(o), v, x, y, copy(nat(n), nat(m), var(x), a, b, body));
      break;
    }
    case SchemaId::cp_comm: {
      std::uint64_t n = g3(), m = g3();
      std::string x = fresh("x"), y = fresh("y");
      Term v = gen(bang(n + m, X()), d);
      t = copy(nat(n), nat(m), v, x, y, body_x({{var(x), bang(n, X())}, {var(y), bang(m, X())}}, d));
      break;
    }
    case SchemaId::ds_pr: t = discard(promote_x(0, d), gen(X(), d)); break;
    case SchemaId::pr_ds: {
      std::uint64_t r = g3();
      std::string x = fresh("x");
      Term v = gen(bang(0, X()), d);
      t = promote_x(r, d, {{x, nat(0)}}, {v}, [&] { return discard(var(x), gen(X(), d)); });
      break;
    }
    case SchemaId::cp_pr: {
      std::uint64_t n = g3(), m = g3();
      std::string y = fresh("y"), z = fresh("z");
      Term p = promote_x(n + m, d);
      t = copy(nat(n), nat(m), p, y, z, body_x({{var(y), bang(n, X())}, {var(z), bang(m, X())}}, d));
      break;
    }
    case SchemaId::pr_cp: {
      std::uint64_t r = g3(), n = g3(), m = g3();
      std::string z = fresh("z"), a = fresh("a"), b = fresh("b");
      Term v = gen(bang(r * (n + m), X()), d);
      t = promote_x(r, d, {{z, nat(n + m)}}, {v}, [&] {
        return copy(nat(n), nat(m), var(z), a, b, body_x({{var(a), bang(n, X())}, {var(b), bang(m, X())}}, d));
      });
      break;
    }
    case SchemaId::cc_unit:
    case SchemaId::cc_pm:
    case SchemaId::cc_ds:
    case SchemaId::cc_cp: {
      std::string p = fresh("p");
      std::vector<Seed> seeds{{var(p), X()}};
      if (coin(2)) {
        Type a = random_type(1);
        seeds.push_back({gen(a, d - 1), a});
      }
      Term c = body_x(seeds, d);
      Path h = *find_var(c, p);
      Term k;
      if (s == SchemaId::cc_unit) {
        k = unit_let(gen(unit_type(), d), gen(X(), d));
      } else if (s == SchemaId::cc_pm) {
        std::string a = fresh("a"), b = fresh("b");
        k = tensor_let(gen(tensor_type(X(), X()), d), a, b, body_x({{var(a), X()}, {var(b), X()}}, d));
      } else if (s == SchemaId::cc_ds) {
        k = discard(gen(bang(0, X()), d), gen(X(), d));
      } else {
        std::uint64_t n = g3(), m = g3();
        std::string a = fresh("a"), b = fresh("b");
        k = copy(nat(n), nat(m), gen(bang(n + m, X()), d), a, b,
                 body_x({{var(a), bang(n, X())}, {var(b), bang(m, X())}}, d));
      }
      t = replace_at(c, h, k);
      step.bindings.holes = {h};
      break;
    }
  }
  std::vector<Binding> bs = vars_;
  std::shuffle(bs.begin(), bs.end(), rng_);
  return {Context(bs), t, step};
}

// ---- proofs

namespace {

VProof node(ProofKind k, std::vector<VProof> kids = {}) {
  VProof p;
  p.kind = k;
  p.premises = std::move(kids);
  return p;
}

VProof refl(const Context& ctx, const Term& t) {
  VProof p = node(ProofKind::refl);
  p.ctx = ctx;
  p.term = t;
  return p;
}

VProof axiom(const std::string& name, ParamEnv params = {}) {
  VProof p = node(ProofKind::axiom);
  p.name = name;
  p.params = std::move(params);
  return p;
}

}  // namespace

std::string ProofGen::fresh(const std::string& base) { return base + std::to_string(++counter_); }

VProof ProofGen::rename_var(VProof p, const std::string& from) {
  std::string to = fresh("u");
  VProof s = node(ProofKind::cong_subst, {std::move(p), refl(Context({{to, X()}}), var(to))});
  s.name = from;
  return s;
}

VProof ProofGen::leaf_x() {
  auto small = [&] { return Rational(coin(5)); };
  switch (coin(5)) {
    case 0: return rename_var(axiom("wait", {{"n", small()}, {"m", small()}}), "x");
    case 1: return rename_var(axiom("wait_add", {{"n", small()}, {"m", small()}}), "x");
    case 2: return rename_var(axiom("wait_zero"), "x");
    case 3: {
      std::string u = fresh("u");
      return refl(Context({{u, X()}}), op_app("wait_" + std::to_string(coin(3)), {var(u)}));
    }
    default: {
      std::string name = coin(2) ? "max_comm" : "wait_max";
      ParamEnv env;
      if (name == "wait_max") env["n"] = small();
      return rename_var(rename_var(axiom(name, env), "x"), "y");
    }
  }
}

VProof ProofGen::proof_x(int depth) {
  if (depth <= 0) return leaf_x();
  const Theory& th = timed_max_theory();
  switch (coin(9)) {
    case 0: {
      VProof p = node(ProofKind::cong_op, {proof_x(depth - 1)});
      p.name = "wait_" + std::to_string(coin(3));
      return p;
    }
    case 1: {
      VProof p = node(ProofKind::cong_op, {proof_x(depth - 1), proof_x(depth - 1)});
      p.name = coin(2) ? "max" : "min";
      return p;
    }
    case 2: {
      VProof a = proof_x(depth - 1);
      VProof b = a;
      return node(ProofKind::trans, {a, node(ProofKind::sym, {b})});
    }
    case 3: return node(ProofKind::sym, {proof_x(depth - 1)});
    case 4: {
      VProof a = proof_x(depth - 1);
      VEquation e = validate(th, a);
      VProof w = node(ProofKind::weak, {a});
      w.q = QuantaleValue::metric(e.bound.magnitude() + Magnitude(Rational(coin(4), 2)));
      if (coin(2)) return node(ProofKind::join, {w, a});
      return w;
    }
    case 5: {
      // wait_n(v) =|n-m| wait_m(v) =|m-k| wait_k(v)
      Rational n(coin(4)), m(coin(4)), k(coin(4));
      VProof t = node(ProofKind::trans, {axiom("wait", {{"n", n}, {"m", m}}), axiom("wait", {{"n", m}, {"m", k}})});
      VProof s = node(ProofKind::cong_subst, {t, proof_x(depth - 1)});
      s.name = "x";
      return s;
    }
    case 6: {
      VProof a = proof_x(depth - 1);
      VEquation e = validate(th, a);
      const std::string& x = e.ctx[static_cast<std::size_t>(coin(static_cast<int>(e.ctx.size())))].name;
      VProof s = node(ProofKind::cong_subst, {a, proof_x(depth - 1)});
      s.name = x;
      return s;
    }
    default: return leaf_x();
  }
}

VProof ProofGen::proof(int depth) {
  VProof p = proof_x(depth);
  const Theory& th = timed_max_theory();
  VEquation e = validate(th, p);
  if (e.ctx.size() != 1) return p;
  switch (coin(4)) {
    case 0: return node(ProofKind::cong_lambda, {p});
    case 1: {
      VProof pr = node(ProofKind::cong_promote, {node(ProofKind::cong_lambda, {p})});
      pr.grade = Grade::nat(static_cast<std::uint64_t>(1 + coin(3)));
      return pr;
    }
    case 2: {
      // promote[r; 1](w; z => body[derelict z / x])
      std::uint64_t r = static_cast<std::uint64_t>(coin(4));
      std::string z = fresh("z"), w = fresh("w");
      VProof body = node(ProofKind::cong_subst, {p, refl(Context({{z, bang_type(Grade::nat(1), X())}}), derelict(var(z)))});
      body.name = e.ctx[0].name;
      VProof pr = node(ProofKind::cong_promote,
                       {refl(Context({{w, bang_type(Grade::nat(r), X())}}), var(w)), body});
      pr.grade = Grade::nat(r);
      return pr;
    }
    default: return p;
  }
}

}  // namespace gvlam::testgen
