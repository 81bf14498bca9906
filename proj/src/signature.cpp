#include "gvlam/signature.hpp"

#include "gvlam/error.hpp"
#include "gvlam/parser.hpp"

namespace gvlam {

void Signature::add_ground(const std::string& name) {
  if (name == "I") throw Error("'I' is the unit type and cannot be declared as ground");
  if (!is_identifier(name)) throw Error("bad ground type name '" + name + "'");
  grounds_.insert(name);
}

void Signature::add_op(const std::string& symbol, std::vector<Type> arity, Type result) {
  if (arity.empty()) throw Error("operation '" + symbol + "' needs at least one argument (use I -> A for constants)");
  if (!is_identifier(symbol)) throw Error("bad operation name '" + symbol + "'");
  if (ops_.count(symbol)) throw Error("operation '" + symbol + "' declared twice");
  for (auto& a : arity) check_type(a);
  check_type(result);
  ops_[symbol] = OpSig{symbol, std::move(arity), std::move(result), "", {}};
}

void Signature::add_family(OpFamily family) {
  if (families_.count(family.base)) throw Error("family '" + family.base + "' declared twice");
  if (family.arity_templates.empty()) throw Error("family '" + family.base + "' needs at least one argument");
  families_[family.base] = std::move(family);
}

std::string Signature::instance_name(const std::string& base, const std::vector<Rational>& params) {
  std::string out = base;
  for (auto& p : params) out += "_" + param_literal(p);
  return out;
}

std::optional<OpSig> Signature::instantiate(const OpFamily& f, const std::vector<std::string>& segs) const {
  if (segs.size() != f.params.size()) return std::nullopt;
  ParamEnv env;
  std::vector<Rational> values;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    auto q = try_parse_rational(segs[i]);
    if (!q || segs[i].find('.') != std::string::npos || segs[i].front() == '+') return std::nullopt;
    if (param_literal(*q) != segs[i]) return std::nullopt;  // canonical spelling only
    if (f.params[i].kind == ParamKind::nat && !is_natural(*q)) return std::nullopt;
    env[f.params[i].name] = *q;
    values.push_back(*q);
  }
  if (!f.condition.holds(env)) return std::nullopt;
  OpSig sig;
  sig.symbol = instance_name(f.base, values);
  sig.family = f.base;
  sig.params = values;
  for (auto& t : f.arity_templates) {
    sig.arity.push_back(parse_type(instantiate_template(t, env)));
    check_type(sig.arity.back());
  }
  sig.result = parse_type(instantiate_template(f.result_template, env));
  check_type(sig.result);
  return sig;
}

std::optional<OpSig> Signature::lookup(const std::string& symbol) const {
  if (auto it = ops_.find(symbol); it != ops_.end()) return it->second;
  for (auto& [base, f] : families_) {
    if (symbol.size() <= base.size() + 1 || symbol.compare(0, base.size(), base) != 0 || symbol[base.size()] != '_')
      continue;
    auto segs = identifier_segments(symbol.substr(base.size() + 1));
    if (auto sig = instantiate(f, segs)) return sig;
  }
  return std::nullopt;
}

void Signature::check_type(const Type& t) const {
  if (auto g = t.as<type::Ground>()) {
    if (!grounds_.count(g->name)) throw TypeError("unknown ground type '" + g->name + "'", {});
  } else if (auto p = t.as<type::Tensor>()) {
    check_type(p->left);
    check_type(p->right);
  } else if (auto l = t.as<type::Lolli>()) {
    check_type(l->domain);
    check_type(l->codomain);
  } else if (auto b = t.as<type::Bang>()) {
    if (!semiring_.contains(b->grade))
      throw TypeError("grade " + to_string(b->grade) + " is not in the " + semiring_.name() + " semiring", {});
    check_type(b->body);
  }
}

std::pair<std::vector<std::string>, std::string> split_op_type(const std::string& text) {
  int depth = 0;
  std::size_t arrow = std::string::npos;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    if (text[i] == ')') --depth;
    if (depth == 0 && text[i] == '-' && text[i + 1] == '>') arrow = i;
  }
  if (arrow == std::string::npos) throw Error("operation type '" + text + "' lacks '->'");
  std::vector<std::string> args;
  std::string cur;
  depth = 0;
  for (std::size_t i = 0; i < arrow; ++i) {
    char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      args.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  args.push_back(cur);
  return {args, text.substr(arrow + 2)};
}

}  // namespace gvlam
