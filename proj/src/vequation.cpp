#include "gvlam/vequation.hpp"

#include <functional>

#include "gvlam/error.hpp"
#include "gvlam/parser.hpp"

namespace gvlam {

std::string to_string(const VEquation& e) {
  std::string c = to_string(e.ctx);
  return (c.empty() ? "" : c + " ") + "|- " + to_string(e.lhs) + " =[" + to_string(e.bound) + "] " +
         to_string(e.rhs) + " : " + to_string(e.type);
}

std::string bound_report(const VEquation& e) {
  std::string out = to_string(e.bound);
  if (e.bound.kind() != QuantaleKind::boolean && !e.bound.magnitude().is_rational() &&
      !e.bound.magnitude().is_infinite())
    out += " in " + enclosure_string(e.bound.magnitude());
  return out;
}

namespace {

const std::vector<std::pair<ProofKind, std::string>>& kind_names() {
  static const std::vector<std::pair<ProofKind, std::string>> names = {
      {ProofKind::refl, "refl"},
      {ProofKind::trans, "trans"},
      {ProofKind::weak, "weak"},
      {ProofKind::join, "join"},
      {ProofKind::sym, "sym"},
      {ProofKind::perm, "perm"},
      {ProofKind::axiom, "axiom"},
      {ProofKind::step, "step"},
      {ProofKind::cong_op, "cong-op"},
      {ProofKind::cong_unit_let, "cong-unit-let"},
      {ProofKind::cong_pair, "cong-pair"},
      {ProofKind::cong_tensor_let, "cong-tensor-let"},
      {ProofKind::cong_lambda, "cong-lambda"},
      {ProofKind::cong_app, "cong-app"},
      {ProofKind::cong_derelict, "cong-derelict"},
      {ProofKind::cong_discard, "cong-discard"},
      {ProofKind::cong_copy, "cong-copy"},
      {ProofKind::cong_promote, "cong-promote"},
      {ProofKind::cong_subst, "cong-subst"},
  };
  return names;
}

}  // namespace

std::string proof_kind_name(ProofKind k) {
  for (auto& [kk, n] : kind_names())
    if (kk == k) return n;
  return "?";
}

std::optional<ProofKind> parse_proof_kind(const std::string& s) {
  for (auto& [kk, n] : kind_names())
    if (n == s) return kk;
  return std::nullopt;
}

std::size_t proof_size(const VProof& p) {
  std::size_t n = 1;
  for (auto& c : p.premises) n += proof_size(c);
  return n;
}

// ---------------------------------------------------------------------------
// validation

namespace {

class Validator {
 public:
  explicit Validator(const Theory& th) : th_(th) {}

  VProof run(const VProof& p) {
    VProof out = p;
    out.premises.clear();
    std::vector<VEquation> kids;
    for (std::size_t i = 0; i < p.premises.size(); ++i) {
      path_.push_back(i);
      out.premises.push_back(run(p.premises[i]));
      path_.pop_back();
      kids.push_back(*out.premises.back().concl);
    }
    VEquation eq;
    try {
      eq = node(p, kids);
    } catch (const ProofError& e) {
      if (!e.path().empty()) throw;
      fail(e.reason());
    } catch (const TypeError& e) {
      fail(proof_kind_name(p.kind) + ": conclusion is ill-typed: " + e.what());
    } catch (const RewriteError& e) {
      fail(proof_kind_name(p.kind) + ": " + e.what());
    } catch (const Error& e) {
      fail(proof_kind_name(p.kind) + ": " + e.what());
    }
    if (p.concl) {
      const VEquation& s = *p.concl;
      if (!(s.ctx == eq.ctx) || !alpha_eq(s.lhs, eq.lhs) || !alpha_eq(s.rhs, eq.rhs) || !(s.type == eq.type) ||
          !(s.bound == eq.bound))
        fail("stored conclusion " + to_string(s) + " differs from recomputed " + to_string(eq));
    }
    out.concl = eq;
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ProofError(msg, path_); }

  void arity(const VProof& p, const std::vector<VEquation>& kids, std::size_t n) const {
    if (kids.size() != n)
      fail(proof_kind_name(p.kind) + " expects " + std::to_string(n) + " premise" + (n == 1 ? "" : "s") + ", got " +
           std::to_string(kids.size()));
  }

  VEquation finish(const Context& ctx, const Term& lhs, const Term& rhs, const QuantaleValue& q) const {
    Derivation dl = infer(th_.sig, ctx, lhs);
    Derivation dr = infer(th_.sig, ctx, rhs);
    if (!(dl.concl.type == dr.concl.type))
      fail("sides have different types " + to_string(dl.concl.type) + " and " + to_string(dr.concl.type));
    return VEquation{ctx, lhs, rhs, dl.concl.type, q};
  }

  QuantaleValue tensor_all(const std::vector<VEquation>& kids) const {
    QuantaleValue q = th_.quantale.unit();
    for (auto& k : kids) q = th_.quantale.tensor(q, k.bound);
    return q;
  }

  // Child context without its trailing binders.
  struct Part {
    Context outer;
    std::vector<Binding> binders;
  };

  Part split_tail(const VEquation& e, std::size_t nb, const std::string& what) const {
    if (e.ctx.size() < nb) fail(what + ": premise context has fewer than " + std::to_string(nb) + " variables");
    auto& bs = e.ctx.bindings();
    Part p;
    p.outer = Context(std::vector<Binding>(bs.begin(), bs.end() - static_cast<std::ptrdiff_t>(nb)));
    p.binders.assign(bs.end() - static_cast<std::ptrdiff_t>(nb), bs.end());
    return p;
  }

  Context conclusion_ctx(const VProof& p, const std::vector<Context>& parts) const {
    if (p.ctx) {
      if (!is_shuffle(*p.ctx, parts)) fail(proof_kind_name(p.kind) + ": context is not a shuffle of the premise contexts");
      return *p.ctx;
    }
    Context c;
    for (auto& part : parts) {
      for (auto& b : part.bindings())
        if (c.contains(b.name)) fail(proof_kind_name(p.kind) + ": premises share variable '" + b.name + "'");
      c = c.concat(part);
    }
    return c;
  }

  VEquation node(const VProof& p, const std::vector<VEquation>& kids) {
    const Quantale& V = th_.quantale;
    auto kind = proof_kind_name(p.kind);
    switch (p.kind) {
      case ProofKind::refl: {
        arity(p, kids, 0);
        if (!p.ctx || !p.term) fail("refl needs :ctx and :term");
        return finish(*p.ctx, p.term, p.term, V.unit());
      }
      case ProofKind::trans: {
        arity(p, kids, 2);
        if (!(kids[0].ctx == kids[1].ctx)) fail("trans: premise contexts differ");
        if (!alpha_eq(kids[0].rhs, kids[1].lhs))
          fail("trans: middle terms differ: " + to_string(kids[0].rhs) + " vs " + to_string(kids[1].lhs));
        return finish(kids[0].ctx, kids[0].lhs, kids[1].rhs, V.tensor(kids[0].bound, kids[1].bound));
      }
      case ProofKind::weak: {
        arity(p, kids, 1);
        if (!p.q) fail("weak needs :q");
        if (!V.in_basis(*p.q)) fail("weak: label is not a basis element");
        bool ok = false;
        try {
          ok = V.leq(*p.q, kids[0].bound);
        } catch (const IndeterminateComparison& e) {
          fail(std::string("weak: ") + e.what());
        }
        if (!ok) fail("weak: " + to_string(*p.q) + " is not below " + to_string(kids[0].bound));
        VEquation e = kids[0];
        e.bound = *p.q;
        return e;
      }
      case ProofKind::join: {
        if (kids.empty()) fail("join needs at least one premise");
        std::vector<QuantaleValue> qs;
        for (auto& k : kids) {
          if (!(k.ctx == kids[0].ctx) || !alpha_eq(k.lhs, kids[0].lhs) || !alpha_eq(k.rhs, kids[0].rhs))
            fail("join: premises are not about the same equation");
          qs.push_back(k.bound);
        }
        VEquation e = kids[0];
        e.bound = V.join(qs);
        return e;
      }
      case ProofKind::sym: {
        arity(p, kids, 1);
        if (!th_.symmetric) fail("sym used in a theory that is not symmetric");
        VEquation e = kids[0];
        std::swap(e.lhs, e.rhs);
        return e;
      }
      case ProofKind::perm: {
        arity(p, kids, 1);
        if (!p.ctx) fail("perm needs :ctx");
        if (!is_permutation(*p.ctx, kids[0].ctx))
          fail("perm: " + to_string(*p.ctx) + " is not a permutation of " + to_string(kids[0].ctx));
        VEquation e = kids[0];
        e.ctx = *p.ctx;
        return e;
      }
      case ProofKind::axiom: {
        arity(p, kids, 0);
        AxiomInstance inst = axiom_instantiate(th_, p.name, p.params);
        return VEquation{inst.ctx, inst.lhs, inst.rhs, inst.type, inst.bound};
      }
      case ProofKind::step: {
        arity(p, kids, 0);
        if (!p.ctx || !p.term || !p.step) fail("step needs :ctx, :term and a schema");
        Derivation d = infer(th_.sig, *p.ctx, p.term);
        Derivation r = apply_step(th_.sig, d, *p.step);
        if (p.flip) return finish(*p.ctx, r.concl.term, p.term, V.unit());
        return finish(*p.ctx, p.term, r.concl.term, V.unit());
      }
      case ProofKind::cong_op: {
        if (kids.empty()) fail("cong-op needs premises");
        if (p.name.empty()) fail("cong-op needs :op");
        std::vector<Context> parts;
        std::vector<Term> ls, rs;
        for (auto& k : kids) {
          parts.push_back(k.ctx);
          ls.push_back(k.lhs);
          rs.push_back(k.rhs);
        }
        return finish(conclusion_ctx(p, parts), op_app(p.name, ls), op_app(p.name, rs), tensor_all(kids));
      }
      case ProofKind::cong_unit_let:
      case ProofKind::cong_pair:
      case ProofKind::cong_app:
      case ProofKind::cong_discard: {
        arity(p, kids, 2);
        Context c = conclusion_ctx(p, {kids[0].ctx, kids[1].ctx});
        auto make = [&](const Term& a, const Term& b) {
          switch (p.kind) {
            case ProofKind::cong_unit_let: return unit_let(a, b);
            case ProofKind::cong_pair: return tensor_pair(a, b);
            case ProofKind::cong_app: return app(a, b);
            default: return discard(a, b);
          }
        };
        return finish(c, make(kids[0].lhs, kids[1].lhs), make(kids[0].rhs, kids[1].rhs), tensor_all(kids));
      }
      case ProofKind::cong_derelict: {
        arity(p, kids, 1);
        Context c = conclusion_ctx(p, {kids[0].ctx});
        return finish(c, derelict(kids[0].lhs), derelict(kids[0].rhs), kids[0].bound);
      }
      case ProofKind::cong_lambda: {
        arity(p, kids, 1);
        Part b = split_tail(kids[0], 1, kind);
        Context c = conclusion_ctx(p, {b.outer});
        auto& x = b.binders[0];
        return finish(c, lambda(x.name, x.type, kids[0].lhs), lambda(x.name, x.type, kids[0].rhs), kids[0].bound);
      }
      case ProofKind::cong_tensor_let:
      case ProofKind::cong_copy: {
        arity(p, kids, 2);
        Part b = split_tail(kids[1], 2, kind);
        Context c = conclusion_ctx(p, {kids[0].ctx, b.outer});
        auto& x = b.binders[0];
        auto& y = b.binders[1];
        QuantaleValue q = tensor_all(kids);
        if (p.kind == ProofKind::cong_tensor_let)
          return finish(c, tensor_let(kids[0].lhs, x.name, y.name, kids[1].lhs),
                        tensor_let(kids[0].rhs, x.name, y.name, kids[1].rhs), q);
        auto bx = x.type.as<type::Bang>();
        auto by = y.type.as<type::Bang>();
        if (!bx || !by) fail("cong-copy: bound variables must have graded types");
        return finish(c, copy(bx->grade, by->grade, kids[0].lhs, x.name, y.name, kids[1].lhs),
                      copy(bx->grade, by->grade, kids[0].rhs, x.name, y.name, kids[1].rhs), q);
      }
      case ProofKind::cong_promote: {
        if (kids.empty()) fail("cong-promote needs a body premise");
        const VEquation& body = kids.back();
        std::size_t n = kids.size() - 1;
        if (body.ctx.size() != n)
          fail("cong-promote: body context must consist of exactly the " + std::to_string(n) + " bound variables");
        std::vector<Context> parts;
        std::vector<Term> ls, rs;
        std::vector<Grade> gs;
        std::vector<std::string> xs;
        QuantaleValue q = V.unit();
        for (std::size_t i = 0; i < n; ++i) {
          parts.push_back(kids[i].ctx);
          ls.push_back(kids[i].lhs);
          rs.push_back(kids[i].rhs);
          q = V.tensor(q, kids[i].bound);
          auto bt = body.ctx[i].type.as<type::Bang>();
          if (!bt) fail("cong-promote: bound variable '" + body.ctx[i].name + "' lacks a graded type");
          gs.push_back(bt->grade);
          xs.push_back(body.ctx[i].name);
        }
        if (!th_.semiring.contains(p.grade)) fail("cong-promote: grade is not in the semiring");
        q = V.tensor(q, V.scalar_mul(p.grade, body.bound));
        Context c = conclusion_ctx(p, parts);
        return finish(c, promote(p.grade, gs, ls, xs, body.lhs), promote(p.grade, gs, rs, xs, body.rhs), q);
      }
      case ProofKind::cong_subst: {
        arity(p, kids, 2);
        const std::string& x = p.name;
        auto idx = kids[0].ctx.index_of(x);
        if (!idx) fail("cong-subst: '" + x + "' is not in the first premise's context");
        if (!(kids[0].ctx[*idx].type == kids[1].type))
          fail("cong-subst: '" + x + "' has type " + to_string(kids[0].ctx[*idx].type) + " but the second premise has type " +
               to_string(kids[1].type));
        std::vector<Binding> bs;
        for (std::size_t i = 0; i < kids[0].ctx.size(); ++i) {
          if (i == *idx) {
            for (auto& b : kids[1].ctx.bindings()) bs.push_back(b);
          } else {
            bs.push_back(kids[0].ctx[i]);
          }
        }
        for (std::size_t i = 0; i < bs.size(); ++i)
          for (std::size_t j = i + 1; j < bs.size(); ++j)
            if (bs[i].name == bs[j].name) fail("cong-subst: variable '" + bs[i].name + "' occurs in both premises");
        Context c(bs);
        if (p.ctx) {
          if (!is_permutation(*p.ctx, c)) fail("cong-subst: :ctx does not list the substituted context");
          c = *p.ctx;
        }
        return finish(c, substitute(kids[0].lhs, kids[1].lhs, x), substitute(kids[0].rhs, kids[1].rhs, x),
                      tensor_all(kids));
      }
    }
    fail("unknown proof node");
  }

  const Theory& th_;
  Path path_;
};

}  // namespace

VProof annotate(const Theory& th, const VProof& p) { return Validator(th).run(p); }

VEquation validate(const Theory& th, const VProof& p) { return *annotate(th, p).concl; }

// ---------------------------------------------------------------------------
// S-expression form

namespace {

[[noreturn]] void bad(const SExpr& e, const std::string& msg) {
  throw ParseError(msg, static_cast<int>(e.line), static_cast<int>(e.column));
}

std::string text_of(const SExpr& e) {
  if (e.is_list()) bad(e, "expected an atom or string");
  return e.text;
}

Path path_of(const SExpr& e) {
  if (!e.is_list()) bad(e, "expected a path list");
  Path p;
  for (auto& it : e.items) {
    auto q = try_parse_rational(text_of(it));
    if (!q || !is_natural(*q)) bad(it, "path entries are natural numbers");
    p.push_back(static_cast<std::size_t>(q->get_num().get_ui()));
  }
  return p;
}

SExpr atom(const std::string& s) { return SExpr::make_atom(s); }
SExpr str(const std::string& s) { return SExpr::make_string(s); }

SExpr path_sexpr(const Path& p) {
  std::vector<SExpr> items;
  for (auto i : p) items.push_back(atom(std::to_string(i)));
  return SExpr::make_list(items);
}

const std::set<std::string> kStepKeys = {"ctx", "term", "path", "dir", "flip", "holes", "names", "index", "grades", "ctx"};

}  // namespace

VProof parse_proof(const Theory& th, const SExpr& e) {
  auto head = e.head();
  if (!head) bad(e, "expected a proof node (head ...)");
  auto kind = parse_proof_kind(*head);
  if (!kind) bad(e, "unknown proof node '" + *head + "'");
  VProof p;
  p.kind = *kind;
  auto kw = [&](const std::string& k) { return e.keyword(k); };
  try {
    if (auto c = kw("ctx")) p.ctx = parse_context(text_of(*c));
    if (auto t = kw("term")) p.term = parse_term(text_of(*t));
  } catch (const ParseError& pe) {
    bad(e, std::string("in node '") + *head + "': " + pe.what());
  }
  std::vector<const SExpr*> pos = e.positional();
  switch (p.kind) {
    case ProofKind::weak: {
      auto q = kw("q");
      if (!q) bad(e, "weak needs :q");
      try {
        p.q = th.quantale.parse_value(text_of(*q));
      } catch (const Error& err) {
        bad(*q, err.what());
      }
      break;
    }
    case ProofKind::axiom: {
      if (pos.empty() || !pos[0]->is_atom()) bad(e, "axiom needs a name");
      p.name = pos[0]->text;
      pos.erase(pos.begin());
      for (std::size_t i = 1; i + 1 < e.items.size(); ++i) {
        if (!e.items[i].is_atom() || !e.items[i].text.starts_with(":")) continue;
        auto v = try_parse_rational(text_of(e.items[i + 1]));
        if (!v) bad(e.items[i + 1], "axiom parameters are rationals");
        p.params[e.items[i].text.substr(1)] = *v;
        ++i;
      }
      break;
    }
    case ProofKind::step: {
      if (pos.empty() || !pos[0]->is_atom()) bad(e, "step needs a schema name");
      auto s = parse_schema(pos[0]->text);
      if (!s) bad(*pos[0], "unknown schema '" + pos[0]->text + "'");
      pos.erase(pos.begin());
      RewriteStep st;
      st.schema = *s;
      if (auto x = kw("path")) st.path = path_of(*x);
      if (auto x = kw("dir")) {
        std::string d = text_of(*x);
        if (d == "l2r") {
          st.direction = Direction::l2r;
        } else if (d == "r2l") {
          st.direction = Direction::r2l;
        } else {
          bad(*x, "direction is l2r or r2l");
        }
      }
      if (auto x = kw("flip")) p.flip = text_of(*x) == "true";
      if (auto x = kw("holes")) {
        if (!x->is_list()) bad(*x, "holes is a list of paths");
        for (auto& h : x->items) st.bindings.holes.push_back(path_of(h));
      }
      if (auto x = kw("names")) {
        if (!x->is_list()) bad(*x, "names is a list");
        for (auto& n : x->items) st.bindings.names.push_back(text_of(n));
      }
      if (auto x = kw("index")) {
        auto q = try_parse_rational(text_of(*x));
        if (!q || !is_natural(*q)) bad(*x, "index is a natural number");
        st.bindings.index = static_cast<std::size_t>(q->get_num().get_ui());
      }
      if (auto x = kw("grades")) {
        if (!x->is_list()) bad(*x, "grades is a list");
        for (auto& g : x->items) st.bindings.grades.push_back(th.semiring.parse_grade(text_of(g)));
      }
      for (std::size_t i = 1; i + 1 < e.items.size(); ++i) {
        const SExpr& k = e.items[i];
        if (!k.is_atom() || !k.text.starts_with(":")) continue;
        std::string key = k.text.substr(1);
        if (!kStepKeys.count(key)) {
          try {
            st.bindings.terms[key] = parse_term(text_of(e.items[i + 1]));
          } catch (const ParseError& pe) {
            bad(e.items[i + 1], pe.what());
          }
        }
        ++i;
      }
      p.step = st;
      break;
    }
    case ProofKind::cong_op: {
      auto op = kw("op");
      if (!op) bad(e, "cong-op needs :op");
      p.name = text_of(*op);
      break;
    }
    case ProofKind::cong_promote: {
      auto r = kw("r");
      if (!r) bad(e, "cong-promote needs :r");
      try {
        p.grade = th.semiring.parse_grade(text_of(*r));
      } catch (const Error& err) {
        bad(*r, err.what());
      }
      break;
    }
    case ProofKind::cong_subst: {
      auto v = kw("var");
      if (!v) bad(e, "cong-subst needs :var");
      p.name = text_of(*v);
      break;
    }
    default: break;
  }
  for (auto* c : pos) {
    if (!c->is_list()) bad(*c, "unexpected '" + c->text + "'");
    p.premises.push_back(parse_proof(th, *c));
  }
  return p;
}

VProof parse_proof(const Theory& th, std::string_view text) { return parse_proof(th, parse_sexpr(text)); }

SExpr proof_to_sexpr(const VProof& p) {
  std::vector<SExpr> items{atom(proof_kind_name(p.kind))};
  auto key = [&](const std::string& k, SExpr v) {
    items.push_back(atom(":" + k));
    items.push_back(std::move(v));
  };
  switch (p.kind) {
    case ProofKind::axiom:
      items.push_back(atom(p.name));
      for (auto& [k, v] : p.params) key(k, atom(to_string(v)));
      break;
    case ProofKind::step: {
      const RewriteStep& st = *p.step;
      items.push_back(atom(schema_name(st.schema)));
      break;
    }
    case ProofKind::weak: key("q", str(to_string(*p.q))); break;
    case ProofKind::cong_op: key("op", atom(p.name)); break;
    case ProofKind::cong_promote: key("r", atom(to_string(p.grade))); break;
    case ProofKind::cong_subst: key("var", atom(p.name)); break;
    default: break;
  }
  if (p.ctx) key("ctx", str(to_string(*p.ctx)));
  if (p.term) key("term", str(to_string(p.term)));
  if (p.kind == ProofKind::step) {
    const RewriteStep& st = *p.step;
    key("path", path_sexpr(st.path));
    key("dir", atom(st.direction == Direction::l2r ? "l2r" : "r2l"));
    if (p.flip) key("flip", atom("true"));
    if (!st.bindings.holes.empty()) {
      std::vector<SExpr> hs;
      for (auto& h : st.bindings.holes) hs.push_back(path_sexpr(h));
      key("holes", SExpr::make_list(hs));
    }
    if (!st.bindings.names.empty()) {
      std::vector<SExpr> ns;
      for (auto& n : st.bindings.names) ns.push_back(atom(n));
      key("names", SExpr::make_list(ns));
    }
    if (st.bindings.index) key("index", atom(std::to_string(*st.bindings.index)));
    if (!st.bindings.grades.empty()) {
      std::vector<SExpr> gs;
      for (auto& g : st.bindings.grades) gs.push_back(atom(to_string(g)));
      key("grades", SExpr::make_list(gs));
    }
    for (auto& [k, t] : st.bindings.terms) key(k, str(to_string(t)));
  }
  for (auto& c : p.premises) items.push_back(proof_to_sexpr(c));
  return SExpr::make_list(items);
}

std::string to_string(const VProof& p) { return pretty(proof_to_sexpr(p)); }

// ---------------------------------------------------------------------------
// synthesis

namespace {

VProof refl_node(const Context& ctx, const Term& t) {
  VProof p;
  p.kind = ProofKind::refl;
  p.ctx = ctx;
  p.term = t;
  return p;
}

VProof binary(ProofKind k, VProof a, VProof b) {
  VProof p;
  p.kind = k;
  p.premises = {std::move(a), std::move(b)};
  return p;
}

// Template matching of an axiom side against a concrete term.
class Matcher {
 public:
  Matcher(const AxiomSchema& ax) : ax_(ax) {
    for (auto& p : ax.params) params_.insert(p.name);
    for (auto& b : ax.ctx_template->bindings()) ctx_vars_.insert(b.name);
  }

  bool side(const Term& tpl, const Term& t, std::map<std::string, Term>& sigma) {
    std::map<std::string, std::string> bmap;
    return match(tpl, t, bmap, sigma);
  }

  // Parameter values, once both sides matched; nullopt if some are missing or
  // a braced segment disagrees.
  std::optional<ParamEnv> env() const {
    for (auto& p : ax_.params)
      if (!env_.count(p.name)) return std::nullopt;
    for (auto& [expr, lit] : deferred_) {
      try {
        Rational v = Expr::parse(expr).eval_rational(env_);
        if (param_literal(v) != lit) return std::nullopt;
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    return env_;
  }

 private:
  bool symbol(const std::string& tpl, const std::string& s) {
    if (tpl == s) return true;
    auto ts = identifier_segments(tpl);
    auto cs = identifier_segments(s);
    if (ts.size() != cs.size() || ts.empty() || ts[0] != cs[0]) return false;
    for (std::size_t i = 1; i < ts.size(); ++i) {
      if (ts[i] == cs[i]) continue;
      if (params_.count(ts[i])) {
        auto q = try_parse_rational(cs[i]);
        if (!q || param_literal(*q) != cs[i]) return false;
        auto [it, fresh] = env_.emplace(ts[i], *q);
        if (!fresh && it->second != *q) return false;
      } else if (ts[i].size() > 2 && ts[i].front() == '{' && ts[i].back() == '}') {
        deferred_.emplace_back(ts[i].substr(1, ts[i].size() - 2), cs[i]);
      } else {
        return false;
      }
    }
    return true;
  }

  bool match(const Term& tpl, const Term& t, std::map<std::string, std::string>& bmap,
             std::map<std::string, Term>& sigma) {
    if (auto v = tpl.as<term::Var>()) {
      if (auto it = bmap.find(v->name); it != bmap.end()) {
        auto cv = t.as<term::Var>();
        return cv && cv->name == it->second;
      }
      if (!ctx_vars_.count(v->name)) return false;
      for (auto& [from, to] : bmap)
        if (occurs_free(to, t)) return false;
      auto [it, fresh] = sigma.emplace(v->name, t);
      return fresh || alpha_eq(it->second, t);
    }
    if (tpl.node().v.index() != t.node().v.index()) return false;
    if (auto o = tpl.as<term::OpApp>()) {
      auto c = t.as<term::OpApp>();
      if (o->args.size() != c->args.size() || !symbol(o->symbol, c->symbol)) return false;
    } else if (auto l = tpl.as<term::Lambda>()) {
      if (!(l->type == t.as<term::Lambda>()->type)) return false;
    } else if (auto p = tpl.as<term::Promote>()) {
      auto c = t.as<term::Promote>();
      if (!(p->grade == c->grade) || p->arg_grades != c->arg_grades) return false;
    } else if (auto cp = tpl.as<term::Copy>()) {
      auto c = t.as<term::Copy>();
      if (!(cp->left_grade == c->left_grade) || !(cp->right_grade == c->right_grade)) return false;
    }
    auto tk = children(tpl);
    auto ck = children(t);
    if (tk.size() != ck.size()) return false;
    for (std::size_t i = 0; i < tk.size(); ++i) {
      auto tb = binders_of_child(tpl, i);
      auto cb = binders_of_child(t, i);
      if (tb.size() != cb.size()) return false;
      auto saved = bmap;
      for (std::size_t j = 0; j < tb.size(); ++j) bmap[tb[j]] = cb[j];
      bool ok = match(tk[i], ck[i], bmap, sigma);
      bmap = saved;
      if (!ok) return false;
    }
    return true;
  }

  const AxiomSchema& ax_;
  std::set<std::string> params_;
  std::set<std::string> ctx_vars_;
  ParamEnv env_;
  std::vector<std::pair<std::string, std::string>> deferred_;
};

// `w` with the binders of its head renamed to those of `v` (same constructor).
std::optional<Term> align_binders(const Term& v, const Term& w) {
  auto rename = [](const Term& body, const std::vector<std::string>& from, const std::vector<std::string>& to) {
    std::map<std::string, Term> sigma;
    for (std::size_t i = 0; i < from.size(); ++i)
      if (from[i] != to[i]) sigma[from[i]] = var(to[i]);
    return sigma.empty() ? body : substitute(body, sigma);
  };
  if (auto a = v.as<term::TensorLet>()) {
    auto b = w.as<term::TensorLet>();
    return tensor_let(b->scrutinee, a->left_var, a->right_var,
                      rename(b->body, {b->left_var, b->right_var}, {a->left_var, a->right_var}));
  }
  if (auto a = v.as<term::Lambda>()) {
    auto b = w.as<term::Lambda>();
    if (!(a->type == b->type)) return std::nullopt;
    return lambda(a->var, a->type, rename(b->body, {b->var}, {a->var}));
  }
  if (auto a = v.as<term::Copy>()) {
    auto b = w.as<term::Copy>();
    if (!(a->left_grade == b->left_grade) || !(a->right_grade == b->right_grade)) return std::nullopt;
    return copy(a->left_grade, a->right_grade, b->scrutinee, a->left_var, a->right_var,
                rename(b->body, {b->left_var, b->right_var}, {a->left_var, a->right_var}));
  }
  if (auto a = v.as<term::Promote>()) {
    auto b = w.as<term::Promote>();
    if (!(a->grade == b->grade) || a->arg_grades != b->arg_grades || a->args.size() != b->args.size())
      return std::nullopt;
    return promote(a->grade, a->arg_grades, b->args, a->binders, rename(b->body, b->binders, a->binders));
  }
  if (auto a = v.as<term::OpApp>()) {
    auto b = w.as<term::OpApp>();
    if (a->symbol != b->symbol || a->args.size() != b->args.size()) return std::nullopt;
  }
  return w;
}

ProofKind cong_kind(const Term& t) {
  struct V {
    ProofKind operator()(const term::OpApp&) const { return ProofKind::cong_op; }
    ProofKind operator()(const term::Var&) const { return ProofKind::refl; }
    ProofKind operator()(const term::Star&) const { return ProofKind::refl; }
    ProofKind operator()(const term::UnitLet&) const { return ProofKind::cong_unit_let; }
    ProofKind operator()(const term::TensorPair&) const { return ProofKind::cong_pair; }
    ProofKind operator()(const term::TensorLet&) const { return ProofKind::cong_tensor_let; }
    ProofKind operator()(const term::Lambda&) const { return ProofKind::cong_lambda; }
    ProofKind operator()(const term::App&) const { return ProofKind::cong_app; }
    ProofKind operator()(const term::Promote&) const { return ProofKind::cong_promote; }
    ProofKind operator()(const term::Derelict&) const { return ProofKind::cong_derelict; }
    ProofKind operator()(const term::Discard&) const { return ProofKind::cong_discard; }
    ProofKind operator()(const term::Copy&) const { return ProofKind::cong_copy; }
  };
  return std::visit(V{}, t.node().v);
}

class Synth {
 public:
  Synth(const Theory& th, const SynthOptions& opt) : th_(th), opt_(opt) {}

  std::optional<VProof> go(const Context& ctx, const Term& v, const Term& w) {
    if (depth_ >= opt_.max_depth) return std::nullopt;
    ++depth_;
    auto r = attempt(ctx, v, w);
    --depth_;
    return r;
  }

 private:
  std::optional<VProof> attempt(const Context& ctx, const Term& v, const Term& w) {
    if (alpha_eq(v, w)) return refl_node(ctx, v);
    for (auto& ax : th_.axioms) {
      if (!ax.lhs_template) continue;
      if (auto p = by_axiom(ax, ctx, v, w, false)) return p;
      if (th_.symmetric)
        if (auto p = by_axiom(ax, ctx, v, w, true)) return p;
    }
    if (auto p = by_congruence(ctx, v, w)) return p;
    if (opt_.normalize_first)
      if (auto p = by_normalizing(ctx, v, w)) return p;
    return std::nullopt;
  }

  std::optional<Context> ctx_of(const VProof& p) {
    try {
      return validate(th_, p).ctx;
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  std::optional<VProof> by_axiom(const AxiomSchema& ax, const Context& ctx, const Term& v, const Term& w, bool flipped) {
    Matcher m(ax);
    std::map<std::string, Term> sl, sr;
    const Term& a = flipped ? w : v;
    const Term& b = flipped ? v : w;
    if (!m.side(*ax.lhs_template, a, sl) || !m.side(*ax.rhs_template, b, sr)) return std::nullopt;
    auto env = m.env();
    if (!env) return std::nullopt;
    AxiomInstance inst;
    try {
      inst = axiom_instantiate(th_, ax.name, *env);
    } catch (const ProofError&) {
      return std::nullopt;
    }
    if (!alpha_eq(substitute(inst.lhs, sl), a) || !alpha_eq(substitute(inst.rhs, sr), b)) return std::nullopt;

    VProof cur;
    cur.kind = ProofKind::axiom;
    cur.name = ax.name;
    cur.params = *env;

    // Rename instance variables that would collide with the target context.
    std::set<std::string> taken;
    for (auto& n : ctx.names()) taken.insert(n);
    for (auto& b2 : inst.ctx.bindings()) taken.insert(b2.name);
    std::map<std::string, std::string> renamed;
    for (auto& bnd : inst.ctx.bindings()) {
      const std::string& x = bnd.name;
      auto lv = sl.at(x).as<term::Var>();
      auto rv = sr.at(x).as<term::Var>();
      bool identity = lv && rv && lv->name == x && rv->name == x;
      if (identity || !ctx.contains(x)) {
        renamed[x] = x;
        continue;
      }
      std::string y = fresh_name(x, taken);
      taken.insert(y);
      renamed[x] = y;
      VProof s;
      s.kind = ProofKind::cong_subst;
      s.name = x;
      s.premises = {cur, refl_node(Context({Binding{y, bnd.type}}), var(y))};
      cur = s;
    }
    for (auto& bnd : inst.ctx.bindings()) {
      const std::string& x = bnd.name;
      const Term& l = sl.at(x);
      const Term& r = sr.at(x);
      auto lv = l.as<term::Var>();
      auto rv = r.as<term::Var>();
      if (lv && rv && lv->name == x && rv->name == x) continue;
      auto fl = free_vars(l);
      auto fr = free_vars(r);
      if (std::set<std::string>(fl.begin(), fl.end()) != std::set<std::string>(fr.begin(), fr.end()))
        return std::nullopt;
      Context sub_ctx = ctx.restricted_to(std::set<std::string>(fl.begin(), fl.end()));
      auto sub = flipped ? go(sub_ctx, r, l) : go(sub_ctx, l, r);
      if (!sub) return std::nullopt;
      VProof s;
      s.kind = ProofKind::cong_subst;
      s.name = renamed[x];
      s.premises = {cur, *sub};
      cur = s;
    }
    if (flipped) {
      VProof s;
      s.kind = ProofKind::sym;
      s.premises = {cur};
      cur = s;
    }
    auto got = ctx_of(cur);
    if (!got) return std::nullopt;
    if (!(*got == ctx)) {
      if (!is_permutation(*got, ctx)) return std::nullopt;
      VProof s;
      s.kind = ProofKind::perm;
      s.ctx = ctx;
      s.premises = {cur};
      cur = s;
    }
    return cur;
  }

  std::optional<VProof> by_congruence(const Context& ctx, const Term& v, const Term& w0) {
    if (v.node().v.index() != w0.node().v.index()) return std::nullopt;
    ProofKind kind = cong_kind(v);
    if (kind == ProofKind::refl) return std::nullopt;
    std::optional<Term> w;
    Derivation dv, dw;
    try {
      w = align_binders(v, w0);
      if (!w) return std::nullopt;
      dv = infer(th_.sig, ctx, v);
      dw = infer(th_.sig, ctx, *w);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (dv.premises.size() != dw.premises.size()) return std::nullopt;
    auto vk = children(v);
    auto wk = children(*w);
    VProof node;
    node.kind = kind;
    std::vector<Context> parts;
    for (std::size_t i = 0; i < vk.size(); ++i) {
      const Context& cv = dv.premises[i].concl.ctx;
      if (!(cv == dw.premises[i].concl.ctx)) return std::nullopt;
      auto sub = go(cv, vk[i], wk[i]);
      if (!sub) return std::nullopt;
      node.premises.push_back(std::move(*sub));
      std::size_t nb = binders_of_child(v, i).size();
      parts.push_back(Context(std::vector<Binding>(cv.bindings().begin(), cv.bindings().end() - static_cast<std::ptrdiff_t>(nb))));
    }
    if (auto o = v.as<term::OpApp>()) node.name = o->symbol;
    if (auto p = v.as<term::Promote>()) node.grade = p->grade;
    Context cat;
    for (auto& p : parts) cat = cat.concat(p);
    if (!(cat == ctx)) node.ctx = ctx;
    return node;
  }

  // Chain of step nodes from d's term to its normal form (or the reverse).
  std::optional<std::pair<Term, std::vector<VProof>>> normal_chain(const Context& ctx, const Term& t, bool flip) {
    Derivation d = infer(th_.sig, ctx, t);
    NormalizeResult nr = beta_normalize(th_.sig, d, opt_.fuel);
    if (nr.fuel_exhausted) return std::nullopt;
    std::vector<VProof> chain;
    Derivation cur = d;
    for (auto& st : nr.steps) {
      VProof s;
      s.kind = ProofKind::step;
      s.ctx = ctx;
      s.term = cur.concl.term;
      s.step = st;
      s.flip = flip;
      chain.push_back(s);
      cur = apply_step(th_.sig, cur, st);
    }
    return std::make_pair(cur.concl.term, chain);
  }

  std::optional<VProof> by_normalizing(const Context& ctx, const Term& v, const Term& w) {
    std::optional<std::pair<Term, std::vector<VProof>>> lv, lw;
    try {
      lv = normal_chain(ctx, v, false);
      lw = normal_chain(ctx, w, true);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (!lv || !lw || (lv->second.empty() && lw->second.empty())) return std::nullopt;
    auto mid = go(ctx, lv->first, lw->first);
    if (!mid) return std::nullopt;
    VProof cur;
    bool have = false;
    auto push = [&](VProof p) {
      cur = have ? binary(ProofKind::trans, std::move(cur), std::move(p)) : std::move(p);
      have = true;
    };
    for (auto& s : lv->second) push(s);
    push(*mid);
    for (auto it = lw->second.rbegin(); it != lw->second.rend(); ++it) push(*it);
    return cur;
  }

  const Theory& th_;
  SynthOptions opt_;
  std::size_t depth_ = 0;
};

}  // namespace

std::optional<SynthResult> synthesize(const Theory& th, const Context& ctx, const Term& v, const Term& w,
                                      const SynthOptions& opt) {
  Derivation dv = infer(th.sig, ctx, v);
  Derivation dw = infer(th.sig, ctx, w);
  if (!(dv.concl.type == dw.concl.type))
    throw TypeError("sides have different types " + to_string(dv.concl.type) + " and " + to_string(dw.concl.type), {});
  Synth s(th, opt);
  auto p = s.go(ctx, v, w);
  if (!p) return std::nullopt;
  VProof annotated = annotate(th, *p);
  const VEquation& eq = *annotated.concl;
  if (!(eq.ctx == ctx) || !alpha_eq(eq.lhs, v) || !alpha_eq(eq.rhs, w)) return std::nullopt;
  return SynthResult{eq, annotated};
}

}  // namespace gvlam
