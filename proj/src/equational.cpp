#include "gvlam/equational.hpp"

#include <algorithm>
#include <functional>

#include "gvlam/error.hpp"

namespace gvlam {

const std::vector<SchemaId>& all_schemas() {
  static const std::vector<SchemaId> all = {
      SchemaId::pm_beta,      SchemaId::pm_eta,        SchemaId::unit_beta, SchemaId::unit_eta, SchemaId::lam_beta,
      SchemaId::lam_eta,      SchemaId::dr_beta,       SchemaId::dr_eta,    SchemaId::pr_assoc, SchemaId::pr_swap,
      SchemaId::cp_unit_left, SchemaId::cp_unit_right, SchemaId::cp_assoc,  SchemaId::cp_comm,  SchemaId::ds_pr,
      SchemaId::pr_ds,        SchemaId::cp_pr,         SchemaId::pr_cp,     SchemaId::cc_unit,  SchemaId::cc_pm,
      SchemaId::cc_ds,        SchemaId::cc_cp};
  return all;
}

std::string schema_name(SchemaId s) {
  switch (s) {
    case SchemaId::pm_beta: return "pm-beta";
    case SchemaId::pm_eta: return "pm-eta";
    case SchemaId::unit_beta: return "unit-beta";
    case SchemaId::unit_eta: return "unit-eta";
    case SchemaId::lam_beta: return "lam-beta";
    case SchemaId::lam_eta: return "lam-eta";
    case SchemaId::dr_beta: return "dr-beta";
    case SchemaId::dr_eta: return "dr-eta";
    case SchemaId::pr_assoc: return "pr-assoc";
    case SchemaId::pr_swap: return "pr-swap";
    case SchemaId::cp_unit_left: return "cp-unit-left";
    case SchemaId::cp_unit_right: return "cp-unit-right";
    case SchemaId::cp_assoc: return "cp-assoc";
    case SchemaId::cp_comm: return "cp-comm";
    case SchemaId::ds_pr: return "ds-pr";
    case SchemaId::pr_ds: return "pr-ds";
    case SchemaId::cp_pr: return "cp-pr";
    case SchemaId::pr_cp: return "pr-cp";
    case SchemaId::cc_unit: return "cc-unit";
    case SchemaId::cc_pm: return "cc-pm";
    case SchemaId::cc_ds: return "cc-ds";
    case SchemaId::cc_cp: return "cc-cp";
  }
  return "?";
}

std::optional<SchemaId> parse_schema(const std::string& name) {
  for (auto s : all_schemas())
    if (schema_name(s) == name) return s;
  return std::nullopt;
}

std::string schema_group(SchemaId s) {
  switch (s) {
    case SchemaId::pm_beta:
    case SchemaId::pm_eta:
    case SchemaId::unit_beta:
    case SchemaId::unit_eta: return "monoidal";
    case SchemaId::lam_beta:
    case SchemaId::lam_eta: return "closed";
    case SchemaId::dr_beta:
    case SchemaId::dr_eta:
    case SchemaId::pr_assoc:
    case SchemaId::pr_swap: return "comonad";
    case SchemaId::cp_unit_left:
    case SchemaId::cp_unit_right:
    case SchemaId::cp_assoc:
    case SchemaId::cp_comm: return "comonoid";
    case SchemaId::ds_pr:
    case SchemaId::pr_ds:
    case SchemaId::cp_pr:
    case SchemaId::pr_cp: return "interaction";
    default: return "commuting";
  }
}

std::string to_string(const RewriteStep& s) {
  return schema_name(s.schema) + "@" + format_path(s.path) + (s.direction == Direction::l2r ? " l2r" : " r2l");
}

const Derivation& derivation_at(const Derivation& d, const Path& path) {
  const Derivation* cur = &d;
  for (auto i : path) {
    if (i >= cur->premises.size()) throw RewriteError("position " + format_path(path) + " is not in the term");
    cur = &cur->premises[i];
  }
  return *cur;
}

namespace {

class Rewriter {
 public:
  Rewriter(const Signature& sig, const Derivation& d, const RewriteStep& step, const std::set<std::string>& avoid)
      : sig_(sig), d_(d), t_(d.concl.term), step_(step), avoid_(avoid) {
    for (auto& n : all_names(t_)) avoid_.insert(n);
  }

  Term run() {
    bool l2r = step_.direction == Direction::l2r;
    switch (step_.schema) {
      case SchemaId::pm_beta: return l2r ? pm_beta() : pm_beta_r();
      case SchemaId::pm_eta: return l2r ? pm_eta() : pm_eta_r();
      case SchemaId::unit_beta: return l2r ? unit_beta() : unit_let(star(), t_);
      case SchemaId::unit_eta: return l2r ? unit_eta() : unit_eta_r();
      case SchemaId::lam_beta: return l2r ? lam_beta() : lam_beta_r();
      case SchemaId::lam_eta: return l2r ? lam_eta() : lam_eta_r();
      case SchemaId::dr_beta: return l2r ? dr_beta() : dr_beta_r();
      case SchemaId::dr_eta: return l2r ? dr_eta() : dr_eta_r();
      case SchemaId::pr_assoc: return l2r ? pr_assoc() : pr_assoc_r();
      case SchemaId::pr_swap: return pr_swap();
      case SchemaId::cp_unit_left: return l2r ? cp_unit(true) : cp_unit_r(true);
      case SchemaId::cp_unit_right: return l2r ? cp_unit(false) : cp_unit_r(false);
      case SchemaId::cp_assoc: return l2r ? cp_assoc() : cp_assoc_r();
      case SchemaId::cp_comm: return cp_comm();
      case SchemaId::ds_pr: return l2r ? ds_pr() : ds_pr_r();
      case SchemaId::pr_ds: return l2r ? pr_ds() : pr_ds_r();
      case SchemaId::cp_pr: return l2r ? cp_pr() : cp_pr_r();
      case SchemaId::pr_cp: return l2r ? pr_cp() : pr_cp_r();
      case SchemaId::cc_unit:
      case SchemaId::cc_pm:
      case SchemaId::cc_ds:
      case SchemaId::cc_cp: return l2r ? cc() : cc_r();
    }
    fail("unknown schema");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const {
    throw RewriteError(schema_name(step_.schema) + ": " + why);
  }

  Grade one() const { return sig_.semiring().one(); }
  Grade zero() const { return sig_.semiring().zero(); }
  Grade add(const Grade& a, const Grade& b) const {
    try {
      return g_add(a, b);
    } catch (const Error& e) {
      fail(e.what());
    }
  }
  Grade mul(const Grade& a, const Grade& b) const {
    try {
      return g_mul(a, b);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::string fresh(const std::string& base) {
    std::string n = fresh_name(base, avoid_);
    avoid_.insert(n);
    return n;
  }
  std::string name_or_fresh(std::size_t i, const std::string& base) {
    if (i < step_.bindings.names.size()) {
      const std::string& n = step_.bindings.names[i];
      if (avoid_.count(n)) fail("binder name '" + n + "' is already in use");
      avoid_.insert(n);
      return n;
    }
    return fresh(base);
  }

  const Path& hole(std::size_t i) const {
    if (i >= step_.bindings.holes.size()) fail("needs hole " + std::to_string(i + 1) + " in the bindings");
    return step_.bindings.holes[i];
  }

  std::size_t index() const {
    if (!step_.bindings.index) fail("needs an index in the bindings");
    return *step_.bindings.index;
  }

  static std::set<std::string> binders_along(const Term& t, const Path& h) {
    std::set<std::string> out;
    Term cur = t;
    for (auto i : h) {
      auto kids = children(cur);
      if (i >= kids.size()) throw RewriteError("hole " + format_path(h) + " is not in the term");
      for (auto& b : binders_of_child(cur, i)) out.insert(b);
      cur = kids[i];
    }
    return out;
  }

  // Subterm at h, required not to depend on binders above it.
  Term extract(const Term& t, const Path& h) const {
    Term sub = subterm_at(t, h);
    auto bs = binders_along(t, h);
    for (auto& x : free_vars(sub))
      if (bs.count(x)) fail("subterm at " + format_path(h) + " uses '" + x + "', bound above it");
    return sub;
  }

  void check_disjoint(const Path& a, const Path& b) const {
    std::size_t n = std::min(a.size(), b.size());
    if (std::equal(a.begin(), a.begin() + n, b.begin()))
      fail("holes " + format_path(a) + " and " + format_path(b) + " overlap");
  }

  Type type_at(const Path& h) const { return derivation_at(d_, h).concl.type; }

  // u[v/z] where u is t with z at h.
  Term plug(const Term& t, const Path& h, const Term& v) {
    std::string z = fresh("z");
    return substitute(replace_at(t, h, var(z)), v, z);
  }

  // ---- monoidal

  Term pm_beta() {
    auto l = t_.as<term::TensorLet>();
    if (!l) fail("expects let x (*) y = v (*) w in u");
    auto p = l->scrutinee.as<term::TensorPair>();
    if (!p) fail("scrutinee is not a pair");
    return substitute(l->body, {{l->left_var, p->left}, {l->right_var, p->right}});
  }

  Term pm_beta_r() {
    const Path& h1 = hole(0);
    const Path& h2 = hole(1);
    check_disjoint(h1, h2);
    Term a = extract(t_, h1), b = extract(t_, h2);
    std::string x = name_or_fresh(0, "x"), y = name_or_fresh(1, "y");
    Term body = replace_at(replace_at(t_, h1, var(x)), h2, var(y));
    return tensor_let(tensor_pair(a, b), x, y, body);
  }

  Term pm_eta() {
    auto l = t_.as<term::TensorLet>();
    if (!l) fail("expects let x (*) y = v in u");
    const std::string& x = l->left_var;
    const std::string& y = l->right_var;
    auto counts = free_var_counts(l->body);
    if (counts[x] != 1 || counts[y] != 1) fail("pattern variables must occur once");
    std::optional<Path> found;
    std::function<void(const Term&, Path&)> search = [&](const Term& t, Path& p) {
      if (found) return;
      if (auto pr = t.as<term::TensorPair>()) {
        auto a = pr->left.as<term::Var>();
        auto b = pr->right.as<term::Var>();
        if (a && b && a->name == x && b->name == y) {
          found = p;
          return;
        }
      }
      auto kids = children(t);
      for (std::size_t i = 0; i < kids.size(); ++i) {
        auto bs = binders_of_child(t, i);
        if (std::find(bs.begin(), bs.end(), x) != bs.end() || std::find(bs.begin(), bs.end(), y) != bs.end()) continue;
        p.push_back(i);
        search(kids[i], p);
        p.pop_back();
      }
    };
    Path p;
    search(l->body, p);
    if (!found) fail("body does not contain " + x + " (*) " + y);
    return plug(l->body, *found, l->scrutinee);
  }

  Term pm_eta_r() {
    const Path& h = hole(0);
    Term v = extract(t_, h);
    std::string x = name_or_fresh(0, "x"), y = name_or_fresh(1, "y");
    return tensor_let(v, x, y, replace_at(t_, h, tensor_pair(var(x), var(y))));
  }

  Term unit_beta() {
    auto l = t_.as<term::UnitLet>();
    if (!l || !l->scrutinee.as<term::Star>()) fail("expects let unit = unit in v");
    return l->body;
  }

  Term unit_eta() {
    auto l = t_.as<term::UnitLet>();
    if (!l) fail("expects let unit = v in w");
    const Path& h = hole(0);
    if (!subterm_at(l->body, h).as<term::Star>()) fail("hole " + format_path(h) + " of the body is not unit");
    return plug(l->body, h, l->scrutinee);
  }

  Term unit_eta_r() {
    const Path& h = hole(0);
    Term v = extract(t_, h);
    return unit_let(v, replace_at(t_, h, star()));
  }

  // ---- closed

  Term lam_beta() {
    auto a = t_.as<term::App>();
    auto l = a ? a->fn.as<term::Lambda>() : nullptr;
    if (!l) fail("expects (fn x : A => v) w");
    return substitute(l->body, a->arg, l->var);
  }

  Term lam_beta_r() {
    const Path& h = hole(0);
    Term w = extract(t_, h);
    std::string x = name_or_fresh(0, "x");
    return app(lambda(x, type_at(h), replace_at(t_, h, var(x))), w);
  }

  Term lam_eta() {
    auto l = t_.as<term::Lambda>();
    auto a = l ? l->body.as<term::App>() : nullptr;
    auto x = a ? a->arg.as<term::Var>() : nullptr;
    if (!x || x->name != l->var || occurs_free(l->var, a->fn)) fail("expects fn x : A => v x with x not free in v");
    return a->fn;
  }

  Term lam_eta_r() {
    auto lt = d_.concl.type.as<type::Lolli>();
    if (!lt) fail("term does not have a function type");
    std::string x = name_or_fresh(0, "x");
    return lambda(x, lt->domain, app(t_, var(x)));
  }

  // ---- comonad

  Term dr_beta() {
    auto d = t_.as<term::Derelict>();
    auto p = d ? d->operand.as<term::Promote>() : nullptr;
    if (!p || !(p->grade == one())) fail("expects derelict promote[1; ...](...)");
    std::map<std::string, Term> sigma;
    for (std::size_t i = 0; i < p->args.size(); ++i) sigma[p->binders[i]] = p->args[i];
    return substitute(p->body, sigma);
  }

  Term dr_beta_r() {
    auto& hs = step_.bindings.holes;
    for (std::size_t i = 0; i < hs.size(); ++i)
      for (std::size_t j = i + 1; j < hs.size(); ++j) check_disjoint(hs[i], hs[j]);
    std::vector<Grade> gs;
    std::vector<Term> args;
    std::vector<std::string> xs;
    Term body = t_;
    for (std::size_t i = 0; i < hs.size(); ++i) {
      auto bt = type_at(hs[i]).as<type::Bang>();
      if (!bt) fail("hole " + format_path(hs[i]) + " does not have a modal type");
      gs.push_back(bt->grade);
      args.push_back(extract(t_, hs[i]));
      xs.push_back(name_or_fresh(i, "x"));
    }
    for (std::size_t i = 0; i < hs.size(); ++i) body = replace_at(body, hs[i], var(xs[i]));
    return derelict(promote(one(), gs, args, xs, body));
  }

  Term dr_eta() {
    auto p = t_.as<term::Promote>();
    if (!p || p->args.size() != 1 || !(p->arg_grades[0] == one())) fail("expects promote[r; 1](z; x => derelict x)");
    auto d = p->body.as<term::Derelict>();
    auto x = d ? d->operand.as<term::Var>() : nullptr;
    if (!x || x->name != p->binders[0]) fail("body is not derelict of the bound variable");
    return p->args[0];
  }

  Term dr_eta_r() {
    auto bt = d_.concl.type.as<type::Bang>();
    if (!bt) fail("term does not have a modal type");
    std::string x = name_or_fresh(0, "x");
    return promote(bt->grade, {one()}, {t_}, {x}, derelict(var(x)));
  }

  Term pr_assoc() {
    auto o = t_.as<term::Promote>();
    if (!o || o->args.empty()) fail("expects a promotion whose first argument is a promotion");
    auto in = o->args[0].as<term::Promote>();
    if (!in) fail("first argument is not a promotion");
    const Grade& r1 = o->grade;
    const Grade& r2 = o->arg_grades[0];
    if (!(in->grade == mul(r1, r2))) fail("inner grade " + to_string(in->grade) + " is not r1*r2");
    std::vector<std::string> cs;
    for (std::size_t i = 0; i < in->args.size(); ++i) cs.push_back(name_or_fresh(i, "c"));
    std::vector<Term> cvars;
    for (auto& c : cs) cvars.push_back(var(c));
    Term moved = promote(r2, in->arg_grades, cvars, in->binders, in->body);
    std::vector<Grade> gs;
    for (auto& s : in->arg_grades) gs.push_back(mul(r2, s));
    gs.insert(gs.end(), o->arg_grades.begin() + 1, o->arg_grades.end());
    std::vector<Term> args = in->args;
    args.insert(args.end(), o->args.begin() + 1, o->args.end());
    std::vector<std::string> bs = cs;
    bs.insert(bs.end(), o->binders.begin() + 1, o->binders.end());
    return promote(r1, gs, args, bs, substitute(o->body, moved, o->binders[0]));
  }

  Term pr_assoc_r() {
    auto o = t_.as<term::Promote>();
    if (!o) fail("expects a promotion");
    const Path& h = hole(0);
    auto in = subterm_at(o->body, h).as<term::Promote>();
    if (!in) fail("hole " + format_path(h) + " of the body is not a promotion");
    std::size_t k = in->args.size();
    if (k > o->args.size()) fail("inner promotion has more arguments than the outer one");
    auto above = binders_along(o->body, h);
    const Grade& r1 = o->grade;
    const Grade& r2 = in->grade;
    for (std::size_t i = 0; i < k; ++i) {
      auto c = in->args[i].as<term::Var>();
      if (!c || c->name != o->binders[i] || above.count(c->name))
        fail("inner argument " + std::to_string(i) + " is not the outer binder " + o->binders[i]);
      if (!(o->arg_grades[i] == mul(r2, in->arg_grades[i]))) fail("outer grade of argument " + std::to_string(i) + " is not r2*s");
    }
    std::vector<Term> xs(o->args.begin(), o->args.begin() + k);
    Term inner = promote(mul(r1, r2), in->arg_grades, xs, in->binders, in->body);
    std::string a = name_or_fresh(0, "a");
    std::vector<Grade> gs = {r2};
    gs.insert(gs.end(), o->arg_grades.begin() + k, o->arg_grades.end());
    std::vector<Term> args = {inner};
    args.insert(args.end(), o->args.begin() + k, o->args.end());
    std::vector<std::string> bs = {a};
    bs.insert(bs.end(), o->binders.begin() + k, o->binders.end());
    return promote(r1, gs, args, bs, replace_at(o->body, h, var(a)));
  }

  Term pr_swap() {
    auto p = t_.as<term::Promote>();
    std::size_t i = index();
    if (!p || i + 1 >= p->args.size()) fail("needs a promotion with arguments at " + std::to_string(i) + " and " + std::to_string(i + 1));
    auto gs = p->arg_grades;
    auto args = p->args;
    auto bs = p->binders;
    std::swap(gs[i], gs[i + 1]);
    std::swap(args[i], args[i + 1]);
    std::swap(bs[i], bs[i + 1]);
    return promote(p->grade, gs, args, bs, p->body);
  }

  // ---- comonoid

  Term cp_unit(bool left) {
    auto c = t_.as<term::Copy>();
    if (!c) fail("expects a copy");
    if (!((left ? c->left_grade : c->right_grade) == zero())) fail("discarded side must have grade 0");
    auto ds = c->body.as<term::Discard>();
    auto x = ds ? ds->scrutinee.as<term::Var>() : nullptr;
    const std::string& gone = left ? c->left_var : c->right_var;
    const std::string& kept = left ? c->right_var : c->left_var;
    if (!x || x->name != gone) fail("body is not discard " + gone + " in ...");
    return substitute(ds->body, c->scrutinee, kept);
  }

  Term cp_unit_r(bool left) {
    const Path& h = hole(0);
    Term v = extract(t_, h);
    auto bt = type_at(h).as<type::Bang>();
    if (!bt) fail("hole does not have a modal type");
    std::string x = name_or_fresh(0, "x"), y = name_or_fresh(1, "y");
    if (left) return copy(zero(), bt->grade, v, x, y, discard(var(x), replace_at(t_, h, var(y))));
    return copy(bt->grade, zero(), v, x, y, discard(var(y), replace_at(t_, h, var(x))));
  }

  Term cp_assoc() {
    auto o = t_.as<term::Copy>();
    auto in = o ? o->body.as<term::Copy>() : nullptr;
    auto xv = in ? in->scrutinee.as<term::Var>() : nullptr;
    if (!xv || xv->name != o->left_var) fail("expects copy[n+m,o] v as x,y in copy[n,m] x as a,b in u");
    if (!(o->left_grade == add(in->left_grade, in->right_grade))) fail("outer left grade is not n+m");
    std::string c = name_or_fresh(0, "c");
    return copy(in->left_grade, add(in->right_grade, o->right_grade), o->scrutinee, in->left_var, c,
                copy(in->right_grade, o->right_grade, var(c), in->right_var, o->right_var, in->body));
  }

  Term cp_assoc_r() {
    auto o = t_.as<term::Copy>();
    auto in = o ? o->body.as<term::Copy>() : nullptr;
    auto cv = in ? in->scrutinee.as<term::Var>() : nullptr;
    if (!cv || cv->name != o->right_var) fail("expects copy[n,m+o] v as a,c in copy[m,o] c as b,y in u");
    if (!(o->right_grade == add(in->left_grade, in->right_grade))) fail("outer right grade is not m+o");
    std::string x = name_or_fresh(0, "x");
    return copy(add(o->left_grade, in->left_grade), in->right_grade, o->scrutinee, x, in->right_var,
                copy(o->left_grade, in->left_grade, var(x), o->left_var, in->left_var, in->body));
  }

  Term cp_comm() {
    auto c = t_.as<term::Copy>();
    if (!c) fail("expects a copy");
    return copy(c->right_grade, c->left_grade, c->scrutinee, c->right_var, c->left_var, c->body);
  }

  // ---- interaction

  Term ds_pr() {
    auto d = t_.as<term::Discard>();
    auto p = d ? d->scrutinee.as<term::Promote>() : nullptr;
    if (!p || !(p->grade == zero())) fail("expects discard promote[0; ...](...) in u");
    Term out = d->body;
    for (std::size_t i = p->args.size(); i-- > 0;) out = discard(p->args[i], out);
    return out;
  }

  Term ds_pr_r() {
    std::size_t n = index();
    auto it = step_.bindings.terms.find("w");
    if (it == step_.bindings.terms.end()) fail("needs the promotion body w in the bindings");
    if (step_.bindings.names.size() != n || step_.bindings.grades.size() != n)
      fail("needs " + std::to_string(n) + " binder names and grades");
    std::vector<Term> vs;
    Term cur = t_;
    for (std::size_t i = 0; i < n; ++i) {
      auto d = cur.as<term::Discard>();
      if (!d) fail("expects " + std::to_string(n) + " nested discards");
      vs.push_back(d->scrutinee);
      cur = d->body;
    }
    std::set<std::string> xs(step_.bindings.names.begin(), step_.bindings.names.end());
    for (auto& x : free_vars(it->second))
      if (!xs.count(x)) fail("promotion body uses '" + x + "', which is not a binder");
    return discard(promote(zero(), step_.bindings.grades, vs, step_.bindings.names, it->second), cur);
  }

  Term pr_ds() {
    auto p = t_.as<term::Promote>();
    if (!p || p->args.empty() || !(p->arg_grades[0] == zero())) fail("expects promote[r; 0, ...](v, ...; x, ... => discard x in u)");
    auto d = p->body.as<term::Discard>();
    auto x = d ? d->scrutinee.as<term::Var>() : nullptr;
    if (!x || x->name != p->binders[0]) fail("body is not discard of the first binder");
    return discard(p->args[0], promote(p->grade, std::vector<Grade>(p->arg_grades.begin() + 1, p->arg_grades.end()),
                                       std::vector<Term>(p->args.begin() + 1, p->args.end()),
                                       std::vector<std::string>(p->binders.begin() + 1, p->binders.end()), d->body));
  }

  Term pr_ds_r() {
    auto d = t_.as<term::Discard>();
    auto p = d ? d->body.as<term::Promote>() : nullptr;
    if (!p) fail("expects discard v in promote[...]");
    std::string x = name_or_fresh(0, "x");
    std::vector<Grade> gs = {zero()};
    gs.insert(gs.end(), p->arg_grades.begin(), p->arg_grades.end());
    std::vector<Term> args = {d->scrutinee};
    args.insert(args.end(), p->args.begin(), p->args.end());
    std::vector<std::string> bs = {x};
    bs.insert(bs.end(), p->binders.begin(), p->binders.end());
    return promote(p->grade, gs, args, bs, discard(var(x), p->body));
  }

  Term cp_pr() {
    auto c = t_.as<term::Copy>();
    auto p = c ? c->scrutinee.as<term::Promote>() : nullptr;
    if (!p) fail("expects copy[n,m] promote[n+m; ...](...) as y,z in u");
    const Grade& n = c->left_grade;
    const Grade& m = c->right_grade;
    if (!(p->grade == add(n, m))) fail("promotion grade is not n+m");
    std::vector<std::string> as, bs;
    for (std::size_t i = 0; i < p->args.size(); ++i) {
      as.push_back(fresh("a"));
      bs.push_back(fresh("b"));
    }
    std::vector<Term> av, bv;
    for (auto& a : as) av.push_back(var(a));
    for (auto& b : bs) bv.push_back(var(b));
    Term out = substitute(c->body, {{c->left_var, promote(n, p->arg_grades, av, p->binders, p->body)},
                                    {c->right_var, promote(m, p->arg_grades, bv, p->binders, p->body)}});
    for (std::size_t i = p->args.size(); i-- > 0;)
      out = copy(mul(n, p->arg_grades[i]), mul(m, p->arg_grades[i]), p->args[i], as[i], bs[i], out);
    return out;
  }

  Term cp_pr_r() {
    std::size_t o = index();
    struct Level {
      Grade p, q;
      Term v;
      std::string a, b;
    };
    std::vector<Level> levels;
    Term cur = t_;
    for (std::size_t i = 0; i < o; ++i) {
      auto c = cur.as<term::Copy>();
      if (!c) fail("expects " + std::to_string(o) + " nested copies");
      levels.push_back({c->left_grade, c->right_grade, c->scrutinee, c->left_var, c->right_var});
      cur = c->body;
    }
    const Path& h1 = hole(0);
    const Path& h2 = hole(1);
    check_disjoint(h1, h2);
    auto p1 = subterm_at(cur, h1).as<term::Promote>();
    auto p2 = subterm_at(cur, h2).as<term::Promote>();
    if (!p1 || !p2 || p1->args.size() != o || p2->args.size() != o) fail("holes must hold promotions with " + std::to_string(o) + " arguments");
    auto above1 = binders_along(cur, h1);
    auto above2 = binders_along(cur, h2);
    for (std::size_t i = 0; i < o; ++i) {
      auto a = p1->args[i].as<term::Var>();
      auto b = p2->args[i].as<term::Var>();
      if (!a || a->name != levels[i].a || above1.count(a->name) || !b || b->name != levels[i].b || above2.count(b->name))
        fail("promotion arguments must be the copied variables in order");
      if (!(p1->arg_grades[i] == p2->arg_grades[i])) fail("the two promotions have different argument grades");
      if (!(levels[i].p == mul(p1->grade, p1->arg_grades[i])) || !(levels[i].q == mul(p2->grade, p2->arg_grades[i])))
        fail("copy grades do not match n*s and m*s");
    }
    std::vector<Term> av;
    for (auto& l : levels) av.push_back(var(l.a));
    Term same = promote(p1->grade, p2->arg_grades, av, p2->binders, p2->body);
    if (!alpha_eq(subterm_at(cur, h1), same)) fail("the two promotions have different bodies");
    std::string y = name_or_fresh(0, "y"), z = name_or_fresh(1, "z");
    std::vector<Term> vs;
    for (auto& l : levels) vs.push_back(l.v);
    Term body = replace_at(replace_at(cur, h1, var(y)), h2, var(z));
    return copy(p1->grade, p2->grade, promote(add(p1->grade, p2->grade), p1->arg_grades, vs, p1->binders, p1->body), y, z,
                body);
  }

  Term pr_cp() {
    auto p = t_.as<term::Promote>();
    if (!p || p->args.empty()) fail("expects promote[r; n+m, ...](v, ...; z, ... => copy[n,m] z as x,y in u)");
    auto c = p->body.as<term::Copy>();
    auto z = c ? c->scrutinee.as<term::Var>() : nullptr;
    if (!z || z->name != p->binders[0]) fail("body is not a copy of the first binder");
    if (!(p->arg_grades[0] == add(c->left_grade, c->right_grade))) fail("first argument grade is not n+m");
    std::string a = name_or_fresh(0, "a"), b = name_or_fresh(1, "b");
    std::vector<Grade> gs = {c->left_grade, c->right_grade};
    gs.insert(gs.end(), p->arg_grades.begin() + 1, p->arg_grades.end());
    std::vector<Term> args = {var(a), var(b)};
    args.insert(args.end(), p->args.begin() + 1, p->args.end());
    std::vector<std::string> bs = {c->left_var, c->right_var};
    bs.insert(bs.end(), p->binders.begin() + 1, p->binders.end());
    return copy(mul(p->grade, c->left_grade), mul(p->grade, c->right_grade), p->args[0], a, b,
                promote(p->grade, gs, args, bs, c->body));
  }

  Term pr_cp_r() {
    auto c = t_.as<term::Copy>();
    auto p = c ? c->body.as<term::Promote>() : nullptr;
    if (!p || p->args.size() < 2) fail("expects copy[r*n,r*m] v as a,b in promote[r; n,m,...](a, b, ...; ...)");
    auto a = p->args[0].as<term::Var>();
    auto b = p->args[1].as<term::Var>();
    if (!a || !b || a->name != c->left_var || b->name != c->right_var)
      fail("first two promotion arguments must be the copied variables");
    const Grade& n = p->arg_grades[0];
    const Grade& m = p->arg_grades[1];
    if (!(c->left_grade == mul(p->grade, n)) || !(c->right_grade == mul(p->grade, m))) fail("copy grades are not r*n and r*m");
    std::string z = name_or_fresh(0, "z");
    std::vector<Grade> gs = {add(n, m)};
    gs.insert(gs.end(), p->arg_grades.begin() + 2, p->arg_grades.end());
    std::vector<Term> args = {c->scrutinee};
    args.insert(args.end(), p->args.begin() + 2, p->args.end());
    std::vector<std::string> bs = {z};
    bs.insert(bs.end(), p->binders.begin() + 2, p->binders.end());
    return promote(p->grade, gs, args, bs, copy(n, m, var(z), p->binders[0], p->binders[1], p->body));
  }

  // ---- commuting conversions

  struct Conv {
    Term scrutinee;
    std::vector<std::string> binders;
    Term body;
  };

  std::optional<Conv> as_conv(const Term& t) const {
    switch (step_.schema) {
      case SchemaId::cc_unit:
        if (auto l = t.as<term::UnitLet>()) return Conv{l->scrutinee, {}, l->body};
        break;
      case SchemaId::cc_pm:
        if (auto l = t.as<term::TensorLet>()) return Conv{l->scrutinee, {l->left_var, l->right_var}, l->body};
        break;
      case SchemaId::cc_ds:
        if (auto d = t.as<term::Discard>()) return Conv{d->scrutinee, {}, d->body};
        break;
      case SchemaId::cc_cp:
        if (auto c = t.as<term::Copy>()) return Conv{c->scrutinee, {c->left_var, c->right_var}, c->body};
        break;
      default: break;
    }
    return std::nullopt;
  }

  // Same constructor as `shape` with new parts.
  static Term remake(const Term& shape, const Term& v, const std::vector<std::string>& bs, const Term& body) {
    if (shape.as<term::UnitLet>()) return unit_let(v, body);
    if (shape.as<term::TensorLet>()) return tensor_let(v, bs[0], bs[1], body);
    if (shape.as<term::Discard>()) return discard(v, body);
    auto c = shape.as<term::Copy>();
    return copy(c->left_grade, c->right_grade, v, bs[0], bs[1], body);
  }

  Term cc() {
    const Path& h = hole(0);
    Term inner = subterm_at(t_, h);
    auto conv = as_conv(inner);
    if (!conv) fail("hole " + format_path(h) + " does not hold the expected construct");
    auto above = binders_along(t_, h);
    for (auto& x : free_vars(conv->scrutinee))
      if (above.count(x)) fail("scrutinee uses '" + x + "', bound above the hole");
    std::vector<std::string> bs;
    std::map<std::string, Term> ren;
    for (auto& b : conv->binders) {
      bs.push_back(fresh(b));
      ren[b] = var(bs.back());
    }
    Term w = ren.empty() ? conv->body : substitute(conv->body, ren);
    return remake(inner, conv->scrutinee, bs, replace_at(t_, h, w));
  }

  Term cc_r() {
    auto conv = as_conv(t_);
    if (!conv) fail("term is not the expected construct");
    const Path& h = hole(0);
    Term w = subterm_at(conv->body, h);
    auto above = binders_along(conv->body, h);
    for (auto& x : free_vars(conv->scrutinee))
      if (above.count(x)) fail("scrutinee would be captured by '" + x + "'");
    Term rest = replace_at(conv->body, h, star());
    for (auto& b : conv->binders)
      if (above.count(b) || occurs_free(b, rest)) fail("bound variable '" + b + "' is used outside the hole");
    return replace_at(conv->body, h, remake(t_, conv->scrutinee, conv->binders, w));
  }

  const Signature& sig_;
  const Derivation& d_;
  Term t_;
  const RewriteStep& step_;
  std::set<std::string> avoid_;
};

bool is_one(const Grade& g) { return g.is_infinity() || g.value() == 1; }
bool is_zero(const Grade& g) { return g.is_infinity() || g.value() == 0; }

bool matches(SchemaId s, const Term& t) {
  switch (s) {
    case SchemaId::lam_beta: {
      auto a = t.as<term::App>();
      return a && a->fn.as<term::Lambda>();
    }
    case SchemaId::lam_eta: {
      auto l = t.as<term::Lambda>();
      auto a = l ? l->body.as<term::App>() : nullptr;
      auto x = a ? a->arg.as<term::Var>() : nullptr;
      return x && x->name == l->var && !occurs_free(l->var, a->fn);
    }
    case SchemaId::pm_beta: {
      auto l = t.as<term::TensorLet>();
      return l && l->scrutinee.as<term::TensorPair>();
    }
    case SchemaId::unit_beta: {
      auto l = t.as<term::UnitLet>();
      return l && l->scrutinee.as<term::Star>();
    }
    case SchemaId::dr_beta: {
      auto d = t.as<term::Derelict>();
      auto p = d ? d->operand.as<term::Promote>() : nullptr;
      return p && is_one(p->grade);
    }
    case SchemaId::dr_eta: {
      auto p = t.as<term::Promote>();
      if (!p || p->args.size() != 1 || !is_one(p->arg_grades[0])) return false;
      auto d = p->body.as<term::Derelict>();
      auto x = d ? d->operand.as<term::Var>() : nullptr;
      return x && x->name == p->binders[0];
    }
    case SchemaId::cp_unit_left:
    case SchemaId::cp_unit_right: {
      bool left = s == SchemaId::cp_unit_left;
      auto c = t.as<term::Copy>();
      if (!c || !is_zero(left ? c->left_grade : c->right_grade)) return false;
      auto d = c->body.as<term::Discard>();
      auto x = d ? d->scrutinee.as<term::Var>() : nullptr;
      return x && x->name == (left ? c->left_var : c->right_var);
    }
    default: return false;
  }
}

std::optional<RewriteStep> find_redex_at(const Term& t, Path& path) {
  for (auto s : normalizing_schemas())
    if (matches(s, t)) return RewriteStep{s, path, Direction::l2r, {}};
  auto kids = children(t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    path.push_back(i);
    auto r = find_redex_at(kids[i], path);
    path.pop_back();
    if (r) return r;
  }
  return std::nullopt;
}

}  // namespace

Term rewrite_term(const Signature& sig, const Derivation& d, const RewriteStep& step,
                  const std::set<std::string>& avoid) {
  return Rewriter(sig, d, step, avoid).run();
}

Derivation apply_step(const Signature& sig, const Derivation& d, const RewriteStep& step) {
  const Derivation& sub = derivation_at(d, step.path);
  std::set<std::string> avoid = all_names(d.concl.term);
  for (auto& b : d.concl.ctx.bindings()) avoid.insert(b.name);
  Term replaced = rewrite_term(sig, sub, step, avoid);
  Term whole = replace_at(d.concl.term, step.path, replaced);
  Derivation r;
  try {
    r = infer(sig, d.concl.ctx, whole);
  } catch (const TypeError& e) {
    throw RewriteError(schema_name(step.schema) + ": result does not typecheck: " + e.what());
  }
  if (!(r.concl.type == d.concl.type))
    throw RewriteError(schema_name(step.schema) + ": result has type " + to_string(r.concl.type) + ", expected " +
                       to_string(d.concl.type));
  return r;
}

const std::vector<SchemaId>& normalizing_schemas() {
  static const std::vector<SchemaId> v = {SchemaId::lam_beta,  SchemaId::lam_eta, SchemaId::pm_beta,
                                          SchemaId::unit_beta, SchemaId::dr_beta, SchemaId::dr_eta,
                                          SchemaId::cp_unit_left, SchemaId::cp_unit_right};
  return v;
}

std::optional<RewriteStep> find_redex(const Term& t) {
  Path p;
  return find_redex_at(t, p);
}

NormalizeResult beta_normalize(const Signature& sig, const Derivation& d, std::size_t fuel) {
  NormalizeResult res{d, {}, false};
  while (auto step = find_redex(res.result.concl.term)) {
    if (fuel == 0) {
      res.fuel_exhausted = true;
      break;
    }
    --fuel;
    res.result = apply_step(sig, res.result, *step);
    res.steps.push_back(*step);
  }
  return res;
}

bool eq_script_check(const Signature& sig, const Derivation& lhs, const Derivation& rhs,
                     const std::vector<ScriptStep>& steps) {
  Derivation l = lhs, r = rhs;
  for (auto& s : steps) {
    if (s.side == Side::lhs)
      l = apply_step(sig, l, s.step);
    else
      r = apply_step(sig, r, s.step);
  }
  return l.concl.ctx == r.concl.ctx && l.concl.type == r.concl.type && alpha_eq(l.concl.term, r.concl.term);
}

}  // namespace gvlam
