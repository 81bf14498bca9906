#include "gvlam/theory.hpp"

#include <fstream>
#include <sstream>

#include "gvlam/error.hpp"
#include "gvlam/parser.hpp"
#include "gvlam/typechecker.hpp"

namespace gvlam {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

// "name[params] rest" -> name, params text (without brackets), rest.
struct Head {
  std::string name;
  std::vector<FamilyParam> params;
  std::string rest;
};

std::vector<FamilyParam> parse_params(const std::string& text, std::size_t line) {
  std::vector<FamilyParam> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ParseError("empty parameter", line, 1);
    FamilyParam p;
    if (auto c = item.find(':'); c != std::string::npos) {
      p.name = trim(item.substr(0, c));
      std::string kind = trim(item.substr(c + 1));
      if (kind == "rat") {
        p.kind = ParamKind::rat;
      } else if (kind == "nat") {
        p.kind = ParamKind::nat;
      } else {
        throw ParseError("unknown parameter kind '" + kind + "'", line, 1);
      }
    } else {
      p.name = item;
    }
    if (!is_identifier(p.name) || p.name.find('_') != std::string::npos)
      throw ParseError("bad parameter name '" + p.name + "'", line, 1);
    for (auto& q : out)
      if (q.name == p.name) throw ParseError("parameter '" + p.name + "' repeated", line, 1);
    out.push_back(p);
  }
  return out;
}

Head parse_head(const std::string& text, std::size_t line) {
  Head h;
  std::size_t i = 0;
  while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '[' && text[i] != ':') ++i;
  h.name = text.substr(0, i);
  if (h.name.empty()) throw ParseError("missing name", line, 1);
  if (i < text.size() && text[i] == '[') {
    auto close = text.find(']', i);
    if (close == std::string::npos) throw ParseError("unclosed parameter list", line, 1);
    h.params = parse_params(text.substr(i + 1, close - i - 1), line);
    i = close + 1;
  }
  h.rest = trim(text.substr(i));
  if (h.rest.empty() || h.rest[0] != ':') throw ParseError("expected ':' after '" + h.name + "'", line, 1);
  h.rest = trim(h.rest.substr(1));
  return h;
}

// Splits off a trailing " where COND".
std::pair<std::string, std::string> split_where(const std::string& text) {
  auto w = text.rfind(" where ");
  if (w == std::string::npos) return {text, ""};
  return {trim(text.substr(0, w)), trim(text.substr(w + 7))};
}

ParamEnv sample_env(const std::vector<FamilyParam>&) { return {}; }

}  // namespace

const AxiomSchema* Theory::find_axiom(const std::string& name) const {
  for (auto& a : axioms)
    if (a.name == name) return &a;
  return nullptr;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Theory parse_theory(std::string_view text) {
  Theory th;
  bool declared = false;
  std::vector<std::pair<std::string, std::size_t>> axiom_lines;
  std::stringstream ss{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    if (auto c = raw.find('#'); c != std::string::npos) raw = raw.substr(0, c);
    std::string l = trim(raw);
    if (l.empty()) continue;
    auto sp = l.find_first_of(" \t");
    std::string kw = l.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(l.substr(sp));
    try {
      if (kw == "quantale" || kw == "semiring" || kw == "symmetric") {
        if (declared) throw ParseError("header line '" + kw + "' after declarations", line, 1);
        if (kw == "quantale") {
          th.quantale = Quantale::parse(rest);
        } else if (kw == "semiring") {
          th.semiring = Semiring::parse(rest);
          th.sig = Signature(th.semiring);
        } else if (rest == "true") {
          th.symmetric = true;
        } else if (rest == "false") {
          th.symmetric = false;
        } else {
          throw ParseError("symmetric expects true or false", line, 1);
        }
      } else if (kw == "ground") {
        declared = true;
        th.sig.add_ground(rest);
      } else if (kw == "op") {
        declared = true;
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw ParseError("expected ':' in op declaration", line, 1);
        auto [args, res] = split_op_type(rest.substr(colon + 1));
        std::vector<Type> arity;
        for (auto& a : args) arity.push_back(parse_type(trim(a)));
        th.sig.add_op(trim(rest.substr(0, colon)), std::move(arity), parse_type(trim(res)));
      } else if (kw == "family") {
        declared = true;
        Head h = parse_head(rest, line);
        auto [type_text, cond] = split_where(h.rest);
        auto [args, res] = split_op_type(type_text);
        OpFamily f;
        f.base = h.name;
        f.params = h.params;
        for (auto& a : args) f.arity_templates.push_back(trim(a));
        f.result_template = trim(res);
        f.condition = Condition::parse(cond);
        th.sig.add_family(std::move(f));
      } else if (kw == "axiom") {
        declared = true;
        axiom_lines.emplace_back(rest, line);
      } else {
        throw ParseError("unknown declaration '" + kw + "'", line, 1);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), line, 1);
    }
  }
  // Axioms last so that they may mention any declared symbol.
  for (auto& [rest, ln] : axiom_lines) {
    try {
      Head h = parse_head(rest, ln);
      AxiomSchema ax;
      ax.name = h.name;
      ax.params = h.params;
      ax.line = ln;
      auto [body, cond] = split_where(h.rest);
      ax.condition = Condition::parse(cond);
      if (body.empty() || body[0] != '[') throw ParseError("axiom context must be written [ ... ]", ln, 1);
      auto close = body.find(']');
      if (close == std::string::npos) throw ParseError("unclosed axiom context", ln, 1);
      ax.ctx_text = trim(body.substr(1, close - 1));
      std::string eq = body.substr(close + 1);
      auto eqpos = eq.find("=[");
      if (eqpos == std::string::npos) throw ParseError("axiom needs '=[bound]'", ln, 1);
      auto bclose = eq.find(']', eqpos);
      if (bclose == std::string::npos) throw ParseError("unclosed bound", ln, 1);
      ax.lhs_text = trim(eq.substr(0, eqpos));
      ax.rhs_text = trim(eq.substr(bclose + 1));
      ax.bound = Expr::parse(trim(eq.substr(eqpos + 2, bclose - eqpos - 2)));
      if (th.find_axiom(ax.name)) throw ParseError("axiom '" + ax.name + "' declared twice", ln, 1);
      try {
        ax.ctx_template = parse_context(ax.ctx_text);
        ax.lhs_template = parse_term(ax.lhs_text);
        ax.rhs_template = parse_term(ax.rhs_text);
      } catch (const ParseError&) {
        if (ax.params.empty()) throw;
        ax.ctx_template.reset();
        ax.lhs_template.reset();
        ax.rhs_template.reset();
      }
      th.axioms.push_back(ax);
      if (ax.params.empty()) axiom_instantiate(th, ax.name, sample_env(ax.params));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(e.what(), ln, 1);
    }
  }
  return th;
}

Theory load_theory(const std::string& path) { return parse_theory(read_file(path)); }

std::string params_to_string(const ParamEnv& env, const std::vector<FamilyParam>& names) {
  std::string out;
  auto add = [&](const std::string& k, const Rational& v) {
    if (!out.empty()) out += " ";
    out += k + "=" + to_string(v);
  };
  if (names.empty()) {
    for (auto& [k, v] : env) add(k, v);
  } else {
    for (auto& p : names)
      if (auto it = env.find(p.name); it != env.end()) add(p.name, it->second);
  }
  return out;
}

AxiomInstance axiom_instantiate(const Theory& th, const std::string& name, const ParamEnv& params) {
  const AxiomSchema* ax = th.find_axiom(name);
  if (!ax) throw ProofError("unknown axiom '" + name + "'", {});
  ParamEnv env;
  for (auto& p : ax->params) {
    auto it = params.find(p.name);
    if (it == params.end()) throw ProofError("axiom '" + name + "' needs parameter '" + p.name + "'", {});
    if (p.kind == ParamKind::nat && !is_natural(it->second))
      throw ProofError("parameter '" + p.name + "' of axiom '" + name + "' must be a natural number", {});
    env[p.name] = it->second;
  }
  for (auto& [k, v] : params)
    if (!env.count(k)) throw ProofError("axiom '" + name + "' has no parameter '" + k + "'", {});
  try {
    if (!ax->condition.holds(env))
      throw ProofError("side condition '" + ax->condition.text() + "' of axiom '" + name + "' fails for " +
                           params_to_string(env, ax->params),
                       {});
    AxiomInstance inst;
    inst.name = name;
    inst.params = env;
    inst.ctx = parse_context(instantiate_template(ax->ctx_text, env));
    inst.lhs = parse_term(instantiate_template(ax->lhs_text, env));
    inst.rhs = parse_term(instantiate_template(ax->rhs_text, env));
    for (auto& b : inst.ctx.bindings()) th.sig.check_type(b.type);
    Derivation dl = infer(th.sig, inst.ctx, inst.lhs);
    Derivation dr = infer(th.sig, inst.ctx, inst.rhs);
    if (!(dl.concl.type == dr.concl.type))
      throw ProofError("sides of axiom '" + name + "' have types " + to_string(dl.concl.type) + " and " +
                           to_string(dr.concl.type),
                       {});
    inst.type = dl.concl.type;
    inst.bound = th.quantale.from_magnitude(ax->bound.eval_magnitude(env));
    if (!th.quantale.in_basis(inst.bound))
      throw ProofError("bound of axiom '" + name + "' is not a basis element", {});
    return inst;
  } catch (const ProofError&) {
    throw;
  } catch (const TypeError& e) {
    throw ProofError("axiom '" + name + "' (" + params_to_string(env, ax->params) + ") is ill-typed: " + e.what(), {});
  } catch (const Error& e) {
    throw ProofError("axiom '" + name + "' (" + params_to_string(env, ax->params) + "): " + e.what(), {});
  }
}

}  // namespace gvlam
