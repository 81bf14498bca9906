#include "gvlam/typechecker.hpp"

#include <set>

#include "gvlam/error.hpp"

namespace gvlam {

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::ax: return "ax";
    case Rule::hp: return "hp";
    case Rule::I_i: return "I_i";
    case Rule::I_e: return "I_e";
    case Rule::tensor_i: return "tensor_i";
    case Rule::tensor_e: return "tensor_e";
    case Rule::lolli_i: return "lolli_i";
    case Rule::lolli_e: return "lolli_e";
    case Rule::bang_i: return "bang_i";
    case Rule::bang_e: return "bang_e";
    case Rule::bang_0: return "bang_0";
    case Rule::bang_sum: return "bang_sum";
  }
  return "?";
}

std::string to_string(const Judgement& j) {
  std::string c = to_string(j.ctx);
  return (c.empty() ? "" : c + " ") + "|- " + to_string(j.term) + " : " + to_string(j.type);
}

bool same_derivation(const Derivation& a, const Derivation& b) {
  if (a.rule != b.rule || !(a.concl.ctx == b.concl.ctx) || !(a.concl.type == b.concl.type) ||
      !syntactically_equal(a.concl.term, b.concl.term) || a.split != b.split || a.premises.size() != b.premises.size())
    return false;
  for (std::size_t i = 0; i < a.premises.size(); ++i)
    if (!same_derivation(a.premises[i], b.premises[i])) return false;
  return true;
}

std::size_t derivation_size(const Derivation& d) {
  std::size_t n = 1;
  for (auto& p : d.premises) n += derivation_size(p);
  return n;
}

namespace {

class Inferrer {
 public:
  explicit Inferrer(const Signature& sig) : sig_(sig) {}

  Derivation go(const Context& ctx, const Term& t) {
    if (auto v = t.as<term::Var>()) return var_rule(ctx, t, *v);
    if (t.as<term::Star>()) {
      if (!ctx.empty()) fail("variable '" + ctx[0].name + "' is unused");
      return leaf(Rule::I_i, ctx, t, unit_type());
    }

    std::vector<Context> parts;
    std::vector<std::size_t> split = split_context(ctx, t, parts);
    Derivation d;
    d.concl.ctx = ctx;
    d.concl.term = t;
    d.split = split;

    if (auto op = t.as<term::OpApp>()) {
      auto sig = sig_.lookup(op->symbol);
      if (!sig) fail("unknown operation '" + op->symbol + "'");
      if (sig->arity.size() != op->args.size())
        fail("'" + op->symbol + "' takes " + std::to_string(sig->arity.size()) + " argument(s), given " +
             std::to_string(op->args.size()));
      for (std::size_t i = 0; i < op->args.size(); ++i) {
        Derivation p = sub(i, parts[i], op->args[i]);
        if (!(p.concl.type == sig->arity[i]))
          fail_at(i, "argument of '" + op->symbol + "' has type " + to_string(p.concl.type) + ", expected " +
                         to_string(sig->arity[i]));
        d.premises.push_back(std::move(p));
      }
      d.rule = Rule::ax;
      d.concl.type = sig->result;
      return d;
    }
    if (auto u = t.as<term::UnitLet>()) {
      Derivation p0 = sub(0, parts[0], u->scrutinee);
      if (!p0.concl.type.as<type::Unit>())
        fail_at(0, "let unit expects a term of type I, got " + to_string(p0.concl.type));
      Derivation p1 = sub(1, parts[1], u->body);
      d.rule = Rule::I_e;
      d.concl.type = p1.concl.type;
      d.premises = {std::move(p0), std::move(p1)};
      return d;
    }
    if (auto p = t.as<term::TensorPair>()) {
      Derivation p0 = sub(0, parts[0], p->left);
      Derivation p1 = sub(1, parts[1], p->right);
      d.rule = Rule::tensor_i;
      d.concl.type = tensor_type(p0.concl.type, p1.concl.type);
      d.premises = {std::move(p0), std::move(p1)};
      return d;
    }
    if (auto l = t.as<term::TensorLet>()) {
      if (l->left_var == l->right_var) fail("pattern binds '" + l->left_var + "' twice");
      Derivation p0 = sub(0, parts[0], l->scrutinee);
      auto tt = p0.concl.type.as<type::Tensor>();
      if (!tt) fail_at(0, "pattern match on a term of non-tensor type " + to_string(p0.concl.type));
      Context body = parts[1].extended({l->left_var, tt->left}).extended({l->right_var, tt->right});
      Derivation p1 = sub(1, body, l->body);
      d.rule = Rule::tensor_e;
      d.concl.type = p1.concl.type;
      d.premises = {std::move(p0), std::move(p1)};
      return d;
    }
    if (auto l = t.as<term::Lambda>()) {
      check_type(l->type);
      Derivation p0 = sub(0, parts[0].extended({l->var, l->type}), l->body);
      d.rule = Rule::lolli_i;
      d.concl.type = lolli_type(l->type, p0.concl.type);
      d.premises = {std::move(p0)};
      return d;
    }
    if (auto a = t.as<term::App>()) {
      Derivation p0 = sub(0, parts[0], a->fn);
      auto lt = p0.concl.type.as<type::Lolli>();
      if (!lt) fail_at(0, "applied term has non-function type " + to_string(p0.concl.type));
      Derivation p1 = sub(1, parts[1], a->arg);
      if (!(p1.concl.type == lt->domain))
        fail_at(1, "argument has type " + to_string(p1.concl.type) + ", expected " + to_string(lt->domain));
      d.rule = Rule::lolli_e;
      d.concl.type = lt->codomain;
      d.premises = {std::move(p0), std::move(p1)};
      return d;
    }
    if (auto pr = t.as<term::Promote>()) {
      check_grade(pr->grade);
      std::set<std::string> seen;
      for (auto& b : pr->binders)
        if (!seen.insert(b).second) fail("promotion binds '" + b + "' twice");
      std::vector<Binding> body_ctx;
      for (std::size_t i = 0; i < pr->args.size(); ++i) {
        check_grade(pr->arg_grades[i]);
        Derivation p = sub(i, parts[i], pr->args[i]);
        Grade want = mul(pr->grade, pr->arg_grades[i]);
        auto bt = p.concl.type.as<type::Bang>();
        if (!bt) fail_at(i, "promotion argument has type " + to_string(p.concl.type) + ", expected !" + to_string(want) + " _");
        if (!(bt->grade == want))
          fail_at(i, "grade mismatch: promotion argument has grade " + to_string(bt->grade) + ", expected " +
                         to_string(pr->grade) + "*" + to_string(pr->arg_grades[i]) + " = " + to_string(want));
        body_ctx.push_back({pr->binders[i], bang_type(pr->arg_grades[i], bt->body)});
        d.premises.push_back(std::move(p));
      }
      std::size_t n = pr->args.size();
      Derivation pb = sub(n, Context(std::move(body_ctx)), pr->body);
      d.rule = Rule::bang_i;
      d.concl.type = bang_type(pr->grade, pb.concl.type);
      d.premises.push_back(std::move(pb));
      return d;
    }
    if (auto dr = t.as<term::Derelict>()) {
      Derivation p0 = sub(0, parts[0], dr->operand);
      auto bt = p0.concl.type.as<type::Bang>();
      if (!bt) fail_at(0, "derelict of a term of non-modal type " + to_string(p0.concl.type));
      if (!(bt->grade == sig_.semiring().one()))
        fail("grade mismatch: derelict needs grade " + to_string(sig_.semiring().one()) + ", got " +
             to_string(bt->grade));
      d.rule = Rule::bang_e;
      d.concl.type = bt->body;
      d.premises = {std::move(p0)};
      return d;
    }
    if (auto ds = t.as<term::Discard>()) {
      Derivation p0 = sub(0, parts[0], ds->scrutinee);
      auto bt = p0.concl.type.as<type::Bang>();
      if (!bt) fail_at(0, "discard of a term of non-modal type " + to_string(p0.concl.type));
      if (!(bt->grade == sig_.semiring().zero()))
        fail("grade mismatch: discard needs grade " + to_string(sig_.semiring().zero()) + ", got " +
             to_string(bt->grade));
      Derivation p1 = sub(1, parts[1], ds->body);
      d.rule = Rule::bang_0;
      d.concl.type = p1.concl.type;
      d.premises = {std::move(p0), std::move(p1)};
      return d;
    }
    if (auto cp = t.as<term::Copy>()) {
      check_grade(cp->left_grade);
      check_grade(cp->right_grade);
      if (cp->left_var == cp->right_var) fail("copy binds '" + cp->left_var + "' twice");
      Derivation p0 = sub(0, parts[0], cp->scrutinee);
      auto bt = p0.concl.type.as<type::Bang>();
      if (!bt) fail_at(0, "copy of a term of non-modal type " + to_string(p0.concl.type));
      Grade want;
      try {
        want = g_add(cp->left_grade, cp->right_grade);
      } catch (const Error& e) {
        fail(e.what());
      }
      if (!(bt->grade == want))
        fail("grade mismatch: copy[" + to_string(cp->left_grade) + "," + to_string(cp->right_grade) +
             "] needs grade " + to_string(want) + ", got " + to_string(bt->grade));
      Context body = parts[1]
                         .extended({cp->left_var, bang_type(cp->left_grade, bt->body)})
                         .extended({cp->right_var, bang_type(cp->right_grade, bt->body)});
      Derivation p1 = sub(1, body, cp->body);
      d.rule = Rule::bang_sum;
      d.concl.type = p1.concl.type;
      d.premises = {std::move(p0), std::move(p1)};
      return d;
    }
    fail("unknown term form");
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw TypeError(msg, path_); }
  [[noreturn]] void fail_at(std::size_t i, const std::string& msg) const {
    Path p = path_;
    p.push_back(i);
    throw TypeError(msg, p);
  }

  Derivation sub(std::size_t i, const Context& ctx, const Term& t) {
    path_.push_back(i);
    Derivation d = go(ctx, t);
    path_.pop_back();
    return d;
  }

  static Derivation leaf(Rule r, const Context& ctx, const Term& t, Type a) {
    Derivation d;
    d.rule = r;
    d.concl = {ctx, t, std::move(a)};
    return d;
  }

  Derivation var_rule(const Context& ctx, const Term& t, const term::Var& v) {
    if (!ctx.contains(v.name)) fail("unbound variable '" + v.name + "'");
    for (auto& b : ctx.bindings())
      if (b.name != v.name) fail("variable '" + b.name + "' is unused");
    return leaf(Rule::hp, ctx, t, ctx[0].type);
  }

  void check_type(const Type& a) {
    try {
      sig_.check_type(a);
    } catch (const TypeError& e) {
      fail(e.reason());
    }
  }

  void check_grade(const Grade& g) {
    if (!sig_.semiring().contains(g))
      fail("grade " + to_string(g) + " is not in the " + sig_.semiring().name() + " semiring");
  }

  Grade mul(const Grade& a, const Grade& b) {
    try {
      return g_mul(a, b);
    } catch (const Error& e) {
      fail(e.what());
    }
  }

  std::vector<std::size_t> split_context(const Context& ctx, const Term& t, std::vector<Context>& parts) {
    auto kids = children(t);
    std::vector<std::set<std::string>> owned(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
      auto counts = free_var_counts(kids[i]);
      for (auto& b : binders_of_child(t, i)) counts.erase(b);
      for (auto& [name, n] : counts) owned[i].insert(name);
    }
    if (auto pr = t.as<term::Promote>()) {
      for (auto& name : owned.back()) {
        if (ctx.contains(name))
          fail_at(pr->args.size(), "promotion body uses '" + name + "', which is not bound by the promotion");
        fail_at(pr->args.size(), "unbound variable '" + name + "'");
      }
    }
    std::vector<std::size_t> split(ctx.size());
    std::vector<std::vector<Binding>> acc(kids.size());
    for (std::size_t p = 0; p < ctx.size(); ++p) {
      const auto& name = ctx[p].name;
      std::vector<std::size_t> owners;
      for (std::size_t i = 0; i < kids.size(); ++i)
        if (owned[i].count(name)) owners.push_back(i);
      if (owners.empty()) fail("variable '" + name + "' is unused");
      if (owners.size() > 1) fail("variable '" + name + "' used twice");
      split[p] = owners[0];
      acc[owners[0]].push_back(ctx[p]);
    }
    parts.clear();
    for (auto& a : acc) parts.emplace_back(std::move(a));
    return split;
  }

  const Signature& sig_;
  Path path_;
};

// Reassembles `t` from new children, renaming the binders listed in `ren`.
Term rebuild(const Term& t, const std::vector<Term>& k, const std::map<std::string, std::string>& ren) {
  auto rn = [&](const std::string& s) {
    auto it = ren.find(s);
    return it == ren.end() ? s : it->second;
  };
  if (auto l = t.as<term::TensorLet>()) return tensor_let(k[0], rn(l->left_var), rn(l->right_var), k[1]);
  if (auto l = t.as<term::Lambda>()) return lambda(rn(l->var), l->type, k[0]);
  if (auto p = t.as<term::Promote>()) {
    std::vector<Term> args(k.begin(), k.end() - 1);
    std::vector<std::string> bs;
    for (auto& b : p->binders) bs.push_back(rn(b));
    return promote(p->grade, p->arg_grades, args, bs, k.back());
  }
  if (auto c = t.as<term::Copy>())
    return copy(c->left_grade, c->right_grade, k[0], rn(c->left_var), rn(c->right_var), k[1]);
  return with_children(t, k);
}

std::set<std::string> derivation_names(const Derivation& d) {
  std::set<std::string> out = all_names(d.concl.term);
  for (auto& b : d.concl.ctx.bindings()) out.insert(b.name);
  return out;
}

Derivation subst_at(const Derivation& d, const std::string& x, const Derivation& e) {
  if (d.rule == Rule::hp) return e;
  auto pos = d.concl.ctx.index_of(x);
  if (!pos) throw Error("substitution variable '" + x + "' not in context");
  std::size_t j = d.split[*pos];

  std::set<std::string> avoid = derivation_names(d);
  for (auto& n : derivation_names(e)) avoid.insert(n);
  std::map<std::string, std::string> ren;
  Derivation pj = d.premises[j];
  for (auto& b : binders_of_child(d.concl.term, j)) {
    if (!e.concl.ctx.contains(b)) continue;
    std::string nb = fresh_name(b, avoid);
    avoid.insert(nb);
    ren[b] = nb;
    pj = rename_variable(pj, b, nb);
  }

  Derivation r;
  r.rule = d.rule;
  r.premises = d.premises;
  r.premises[j] = subst_at(pj, x, e);
  std::vector<Term> kids;
  for (auto& p : r.premises) kids.push_back(p.concl.term);
  r.concl.term = rebuild(d.concl.term, kids, ren);
  r.concl.type = d.concl.type;

  std::vector<Binding> ctx;
  for (std::size_t p = 0; p < d.concl.ctx.size(); ++p) {
    if (p == *pos) {
      for (auto& b : e.concl.ctx.bindings()) {
        ctx.push_back(b);
        r.split.push_back(j);
      }
    } else {
      ctx.push_back(d.concl.ctx[p]);
      r.split.push_back(d.split[p]);
    }
  }
  r.concl.ctx = Context(std::move(ctx));
  return r;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

Derivation infer(const Signature& sig, const Context& ctx, const Term& v) { return Inferrer(sig).go(ctx, v); }

Derivation check(const Signature& sig, const Context& ctx, const Term& v, const Type& a) {
  sig.check_type(a);
  Derivation d = infer(sig, ctx, v);
  if (!(d.concl.type == a))
    throw TypeError("type mismatch: term has type " + to_string(d.concl.type) + ", expected " + to_string(a), {});
  return d;
}

Derivation exchange(const Derivation& d, std::size_t i) {
  if (i + 1 >= d.concl.ctx.size())
    throw Error("exchange position " + std::to_string(i) + " out of range for a context of " +
                std::to_string(d.concl.ctx.size()) + " variable(s)");
  Derivation r = d;
  r.concl.ctx = d.concl.ctx.swapped(i);
  std::size_t a = d.split[i], b = d.split[i + 1];
  if (a != b) {
    std::swap(r.split[i], r.split[i + 1]);
  } else {
    std::size_t j = 0;
    for (std::size_t p = 0; p < i; ++p)
      if (d.split[p] == a) ++j;
    r.premises[a] = exchange(d.premises[a], j);
  }
  return r;
}

Derivation rename_variable(const Derivation& d, const std::string& from, const std::string& to) {
  Derivation r = d;
  std::vector<Binding> ctx;
  for (auto b : d.concl.ctx.bindings()) {
    if (b.name == from) b.name = to;
    ctx.push_back(std::move(b));
  }
  r.concl.ctx = Context(std::move(ctx));
  r.concl.term = substitute(d.concl.term, var(to), from);
  for (auto& p : r.premises)
    if (p.concl.ctx.contains(from)) p = rename_variable(p, from, to);
  return r;
}

Derivation subst_derivation(const Derivation& d, const Derivation& e) {
  const Context& g = d.concl.ctx;
  if (g.empty()) throw Error("substitution needs a non-empty context");
  const Binding& x = g[g.size() - 1];
  if (!(x.type == e.concl.type))
    throw TypeError("substituted term has type " + to_string(e.concl.type) + ", variable '" + x.name + "' has type " +
                        to_string(x.type),
                    {});
  Derivation e2 = e;
  std::set<std::string> avoid = derivation_names(d);
  for (auto& n : derivation_names(e)) avoid.insert(n);
  for (auto& b : e.concl.ctx.bindings()) {
    if (!g.contains(b.name)) continue;
    std::string nb = fresh_name(b.name, avoid);
    avoid.insert(nb);
    e2 = rename_variable(e2, b.name, nb);
  }
  return subst_at(d, x.name, e2);
}

std::string to_sexpr(const Derivation& d, int indent) {
  std::string pad(indent, ' ');
  std::string out = pad + "(" + rule_name(d.rule) + " " + quote(to_string(d.concl));
  if (!d.premises.empty() && !d.split.empty()) {
    out += " :split (";
    for (std::size_t i = 0; i < d.split.size(); ++i) out += (i ? " " : "") + std::to_string(d.split[i]);
    out += ")";
  }
  for (auto& p : d.premises) out += "\n" + to_sexpr(p, indent + 2);
  return out + ")";
}

}  // namespace gvlam
