#include "gvlam/metmodel.hpp"

#include <cstdlib>
#include <sstream>

#include "gvlam/error.hpp"

namespace gvlam {

namespace {
// E_0 is the one-point space; in the trivial semiring inf is not 0 here.
bool collapses(const Grade& g) { return !g.is_infinity() && g.value() == 0; }
}  // namespace

std::size_t default_guard() {
  if (const char* g = std::getenv("GVLAM_GUARD")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(g, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

// ---------------------------------------------------------------------------
// spaces

FinMetSpace FinMetSpace::from_matrix(std::string name, std::vector<std::vector<ExtRational>> rows,
                                     std::vector<std::string> labels) {
  FinMetSpace s;
  s.name = std::move(name);
  std::size_t n = rows.size();
  if (labels.empty())
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  if (labels.size() != n) throw ModelError("space '" + s.name + "': label count differs from matrix size");
  s.labels = std::move(labels);
  for (auto& r : rows) {
    if (r.size() != n) throw ModelError("space '" + s.name + "': distance matrix is not square");
    for (auto& x : r) s.d.push_back(x);
  }
  return s;
}

std::vector<std::string> FinMetSpace::violations(bool symmetric) const {
  std::vector<std::string> out;
  std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(dist(i, i) == ExtRational(0))) out.push_back(name + ": dist(" + labels[i] + "," + labels[i] + ") != 0");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && dist(i, j) == ExtRational(0))
        out.push_back(name + ": " + labels[i] + " and " + labels[j] + " are not separated");
      if (symmetric && !(dist(i, j) == dist(j, i)))
        out.push_back(name + ": dist(" + labels[i] + "," + labels[j] + ") is not symmetric");
      for (std::size_t k = 0; k < n; ++k)
        if (dist(i, k) > dist(i, j) + dist(j, k))
          out.push_back(name + ": triangle fails at " + labels[i] + "," + labels[j] + "," + labels[k]);
    }
  }
  return out;
}

FinMetSpace timed_space(std::size_t n) {
  std::vector<std::vector<ExtRational>> rows(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; j <= n; ++j) rows[i].push_back(ExtRational(static_cast<long>(i > j ? i - j : j - i)));
  return FinMetSpace::from_matrix("timed(" + std::to_string(n) + ")", rows);
}

FinMetSpace point_space() { return FinMetSpace::from_matrix("1", {{ExtRational(0)}}, {"*"}); }

// ---------------------------------------------------------------------------
// values

Value Value::atom(std::size_t i) {
  Value v;
  v.kind_ = Kind::atom;
  v.index_ = i;
  return v;
}
Value Value::unit() { return Value(); }
Value Value::pair(Value a, Value b) {
  Value v;
  v.kind_ = Kind::pair;
  v.kids_ = std::make_shared<const std::vector<Value>>(std::vector<Value>{std::move(a), std::move(b)});
  return v;
}
Value Value::fun(std::vector<Value> table, std::shared_ptr<const Index> domain) {
  Value v;
  v.kind_ = Kind::fun;
  v.kids_ = std::make_shared<const std::vector<Value>>(std::move(table));
  v.domain_ = std::move(domain);
  return v;
}

const Value& Value::apply(const Value& x) const {
  auto it = domain_->find(x);
  if (it == domain_->end()) throw ModelError("argument " + to_string(x) + " is outside the function's domain");
  return (*kids_)[it->second];
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  switch (a.kind_) {
    case Value::Kind::unit: return std::strong_ordering::equal;
    case Value::Kind::atom: return a.index_ <=> b.index_;
    default: {
      if (a.kids_ == b.kids_) return std::strong_ordering::equal;
      const auto& x = *a.kids_;
      const auto& y = *b.kids_;
      if (x.size() != y.size()) return x.size() <=> y.size();
      for (std::size_t i = 0; i < x.size(); ++i)
        if (auto c = x[i] <=> y[i]; c != 0) return c;
      return std::strong_ordering::equal;
    }
  }
}

std::string to_string(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::unit: return "*";
    case Value::Kind::atom: return std::to_string(v.index());
    case Value::Kind::pair: return "(" + to_string(v.first()) + "," + to_string(v.second()) + ")";
    case Value::Kind::fun: {
      std::string s = "[";
      for (std::size_t i = 0; i < v.table().size(); ++i) s += (i ? " " : "") + to_string(v.table()[i]);
      return s + "]";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// model

MetModel::MetModel(const Theory& th)
    : th_(std::make_shared<const Theory>(th)), guard_(default_guard()), cache_(std::make_shared<Cache>()) {
  if (th.quantale.kind() == QuantaleKind::boolean)
    throw ModelError("metric models need the metric or ultrametric quantale");
}

void MetModel::set_ground(const std::string& name, FinMetSpace space) {
  if (!th_->sig.grounds().count(name)) throw ModelError("theory has no ground type '" + name + "'");
  auto v = space.violations(th_->symmetric);
  if (!v.empty()) throw ModelError("space for '" + name + "' is not a metric space: " + v[0]);
  grounds_[name] = std::move(space);
  cache_ = std::make_shared<Cache>();
}

void MetModel::set_symbol(const std::string& name, SymbolFn fn) {
  symbols_[name] = std::move(fn);
  cache_ = std::make_shared<Cache>();
}

const FinMetSpace& MetModel::ground(const std::string& name) const {
  auto it = grounds_.find(name);
  if (it == grounds_.end()) throw ModelError("model lacks ground type '" + name + "'");
  return it->second;
}

MetModel MetModel::timed(const Theory& th, std::size_t n) {
  MetModel m(th);
  for (auto& g : th.sig.grounds()) m.set_ground(g, timed_space(n));
  m.set_symbol("wait", [n](const OpSig& s, const std::vector<Value>& a) {
    std::size_t k = static_cast<std::size_t>(s.params.at(0).get_num().get_ui());
    return Value::atom(std::min(a.at(0).index() + k, n));
  });
  m.set_symbol("max", [](const OpSig&, const std::vector<Value>& a) {
    return Value::atom(std::max(a.at(0).index(), a.at(1).index()));
  });
  m.set_symbol("min", [](const OpSig&, const std::vector<Value>& a) {
    return Value::atom(std::min(a.at(0).index(), a.at(1).index()));
  });
  return m;
}

namespace {

std::string strip(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::stringstream ss(s);
  std::vector<std::string> out;
  std::string w;
  while (ss >> w) out.push_back(w);
  return out;
}

}  // namespace

MetModel MetModel::parse(const Theory& th, std::string_view text) {
  MetModel m(th);
  std::stringstream ss{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  auto fail = [&](const std::string& msg) -> void { throw ParseError(msg, line, 1); };
  while (std::getline(ss, raw)) {
    ++line;
    if (auto c = raw.find('#'); c != std::string::npos) raw = raw.substr(0, c);
    auto w = words(raw);
    if (w.empty()) continue;
    if (w[0] == "timed") {
      if (w.size() != 3) fail("expected: timed NAME N");
      auto n = try_parse_rational(w[2]);
      if (!n || !is_natural(*n)) fail("N must be a natural number");
      m.set_ground(w[1], timed_space(n->get_num().get_ui()));
    } else if (w[0] == "space") {
      if (w.size() != 2) fail("expected: space NAME");
      std::vector<std::vector<ExtRational>> rows;
      std::vector<std::string> labels;
      while (true) {
        if (!std::getline(ss, raw)) fail("unterminated space block");
        ++line;
        auto r = words(strip(raw));
        if (r.empty()) continue;
        if (r[0] == "end") break;
        if (r[0] == "labels") {
          labels.assign(r.begin() + 1, r.end());
          continue;
        }
        std::vector<ExtRational> row;
        for (auto& x : r) {
          try {
            row.push_back(parse_ext_rational(x));
          } catch (const Error& e) {
            fail(e.what());
          }
        }
        rows.push_back(row);
      }
      try {
        m.set_ground(w[1], FinMetSpace::from_matrix(w[1], rows, labels));
      } catch (const ModelError& e) {
        fail(e.what());
      }
    } else if (w[0] == "map") {
      if (w.size() != 2) fail("expected: map SYMBOL");
      auto sig = th.sig.lookup(w[1]);
      if (!sig) fail("unknown symbol '" + w[1] + "'");
      for (auto& a : sig->arity)
        if (!a.as<type::Ground>() && !a.as<type::Unit>()) fail("map tables need ground or unit argument types");
      if (!sig->result.as<type::Ground>() && !sig->result.as<type::Unit>()) fail("map tables need a ground or unit result");
      auto table = std::make_shared<std::map<std::vector<std::size_t>, std::size_t>>();
      while (true) {
        if (!std::getline(ss, raw)) fail("unterminated map block");
        ++line;
        auto r = words(strip(raw));
        if (r.empty()) continue;
        if (r[0] == "end") break;
        auto arrow = std::find(r.begin(), r.end(), "->");
        if (arrow == r.end() || arrow + 2 != r.end()) fail("expected: args -> result");
        std::vector<std::size_t> args;
        auto num = [&](const std::string& s) -> std::size_t {
          if (s == "*") return 0;
          auto q = try_parse_rational(s);
          if (!q || !is_natural(*q)) fail("point indices are natural numbers");
          return q->get_num().get_ui();
        };
        for (auto it = r.begin(); it != arrow; ++it) args.push_back(num(*it));
        if (args.size() != sig->arity.size()) fail("wrong number of arguments");
        (*table)[args] = num(*(arrow + 1));
      }
      bool unit_result = sig->result.as<type::Unit>() != nullptr;
      std::string sym = w[1];
      m.set_symbol(sym, [table, unit_result, sym](const OpSig&, const std::vector<Value>& a) {
        std::vector<std::size_t> key;
        for (auto& v : a) key.push_back(v.kind() == Value::Kind::atom ? v.index() : 0);
        auto it = table->find(key);
        if (it == table->end()) throw ModelError("map for '" + sym + "' is not total");
        return unit_result ? Value::unit() : Value::atom(it->second);
      });
    } else {
      fail("unknown model declaration '" + w[0] + "'");
    }
  }
  return m;
}

MetModel MetModel::from_spec(const Theory& th, const std::string& spec) {
  if (spec.starts_with("timed(") && spec.ends_with(")")) {
    auto n = try_parse_rational(spec.substr(6, spec.size() - 7));
    if (!n || !is_natural(*n)) throw ModelError("bad model spec '" + spec + "'");
    return timed(th, n->get_num().get_ui());
  }
  return parse(th, read_file(spec));
}

ExtRational MetModel::scale(const Grade& r, const ExtRational& d) const {
  if (d == ExtRational(0)) return d;
  if (r.is_infinity()) return ExtRational::infinity();
  if (r.value() == 0) return ExtRational(0);
  if (th_->quantale.kind() == QuantaleKind::ultrametric) return d;
  return d * Rational(static_cast<unsigned long>(r.value()));
}

ExtRational MetModel::combine(const ExtRational& a, const ExtRational& b) const {
  if (th_->quantale.kind() == QuantaleKind::ultrametric) return max(a, b);
  return a + b;
}

ExtRational MetModel::dist(const Type& a, const Value& x, const Value& y) const {
  if (auto g = a.as<type::Ground>()) return ground(g->name).dist(x.index(), y.index());
  if (a.as<type::Unit>()) return ExtRational(0);
  if (auto t = a.as<type::Tensor>())
    return combine(dist(t->left, x.first(), y.first()), dist(t->right, x.second(), y.second()));
  if (auto l = a.as<type::Lolli>()) {
    ExtRational sup(0);
    for (std::size_t i = 0; i < x.table().size(); ++i) sup = max(sup, dist(l->codomain, x.table()[i], y.table()[i]));
    return sup;
  }
  auto b = a.as<type::Bang>();
  if (collapses(b->grade)) return ExtRational(0);
  return scale(b->grade, dist(b->body, x, y));
}

const std::vector<Value>& MetModel::points(const Type& a) const {
  std::string key = to_string(a);
  auto cache = cache_;
  {
    std::lock_guard<std::mutex> lock(cache->mu);
    if (auto it = cache->points.find(key); it != cache->points.end()) return *it->second;
  }
  std::vector<Value> out;
  if (auto g = a.as<type::Ground>()) {
    for (std::size_t i = 0; i < ground(g->name).size(); ++i) out.push_back(Value::atom(i));
  } else if (a.as<type::Unit>()) {
    out.push_back(Value::unit());
  } else if (auto t = a.as<type::Tensor>()) {
    const auto& l = points(t->left);
    const auto& r = points(t->right);
    if (l.size() * r.size() > guard_) throw GuardExceeded("space of " + key + " exceeds the enumeration guard");
    for (auto& x : l)
      for (auto& y : r) out.push_back(Value::pair(x, y));
  } else if (auto b = a.as<type::Bang>()) {
    if (collapses(b->grade)) {
      out.push_back(Value::unit());
    } else {
      out = points(b->body);
    }
  } else {
    auto f = a.as<type::Lolli>();
    const auto& dom = points(f->domain);
    const auto& cod = points(f->codomain);
    auto dom_index = index_map(f->domain);
    // Backtracking over tables, pruned by non-expansiveness.
    std::vector<std::size_t> choice(dom.size(), 0);
    std::size_t visited = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (++visited > guard_) throw GuardExceeded("enumerating " + key + " exceeds the guard of " + std::to_string(guard_));
      if (i == dom.size()) {
        std::vector<Value> table;
        for (auto c : choice) table.push_back(cod[c]);
        out.push_back(Value::fun(std::move(table), dom_index));
        return;
      }
      for (std::size_t c = 0; c < cod.size(); ++c) {
        bool ok = true;
        for (std::size_t j = 0; j < i && ok; ++j)
          ok = dist(f->codomain, cod[choice[j]], cod[c]) <= dist(f->domain, dom[j], dom[i]);
        if (!ok) continue;
        choice[i] = c;
        rec(i + 1);
      }
    };
    rec(0);
  }
  auto ptr = std::make_shared<const std::vector<Value>>(std::move(out));
  std::lock_guard<std::mutex> lock(cache->mu);
  auto [it, fresh] = cache->points.emplace(key, ptr);
  return *it->second;
}

std::shared_ptr<const Value::Index> MetModel::index_map(const Type& a) const {
  std::string key = to_string(a);
  auto cache = cache_;
  {
    std::lock_guard<std::mutex> lock(cache->mu);
    if (auto it = cache->index.find(key); it != cache->index.end()) return it->second;
  }
  const auto& ps = points(a);
  auto m = std::make_shared<Value::Index>();
  for (std::size_t i = 0; i < ps.size(); ++i) m->emplace(ps[i], i);
  std::lock_guard<std::mutex> lock(cache->mu);
  return cache->index.emplace(key, m).first->second;
}

std::size_t MetModel::index_of(const Type& a, const Value& x) const {
  auto idx = index_map(a);
  auto it = idx->find(x);
  if (it == idx->end()) throw ModelError("value " + to_string(x) + " is not a point of " + to_string(a));
  return it->second;
}

FinMetSpace MetModel::interp_type(const Type& a) const {
  const auto& ps = points(a);
  if (ps.size() > 4096) throw GuardExceeded("refusing to materialise a distance matrix for " + to_string(a));
  std::vector<std::vector<ExtRational>> rows(ps.size());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    labels.push_back(to_string(ps[i]));
    for (std::size_t j = 0; j < ps.size(); ++j) rows[i].push_back(dist(a, ps[i], ps[j]));
  }
  return FinMetSpace::from_matrix(to_string(a), rows, labels);
}

void MetModel::check_symbol(const OpSig& sig) const {
  auto cache = cache_;
  {
    std::lock_guard<std::mutex> lock(cache->mu);
    if (cache->checked.count(sig.symbol)) return;
  }
  Context ctx;
  for (std::size_t i = 0; i < sig.arity.size(); ++i) ctx = ctx.extended({"a" + std::to_string(i), sig.arity[i]});
  auto pts = context_points(ctx);
  std::map<std::vector<Value>, Value> table;
  for (auto& p : pts) table[p] = apply_op(sig.symbol, p);
  // One coordinate at a time suffices for the sum metric on the domain.
  for (auto& p : pts)
    for (std::size_t i = 0; i < p.size(); ++i)
      for (auto& y : points(sig.arity[i])) {
        auto q = p;
        q[i] = y;
        if (dist(sig.result, table[p], table[q]) > dist(sig.arity[i], p[i], y))
          throw ModelError("interpretation of '" + sig.symbol + "' is not non-expansive");
      }
  std::lock_guard<std::mutex> lock(cache->mu);
  cache->checked.insert(sig.symbol);
}

Value MetModel::apply_op(const std::string& symbol, const std::vector<Value>& args) const {
  auto sig = th_->sig.lookup(symbol);
  if (!sig) throw ModelError("unknown symbol '" + symbol + "'");
  auto it = symbols_.find(symbol);
  if (it == symbols_.end() && !sig->family.empty()) it = symbols_.find(sig->family);
  if (it == symbols_.end()) throw ModelError("model lacks symbol '" + symbol + "'");
  return it->second(*sig, args);
}

Value MetModel::eval(const Term& t, const std::map<std::string, Value>& env) const {
  auto in_env = [&](const std::string& x) -> const Value& {
    auto it = env.find(x);
    if (it == env.end()) throw ModelError("unbound variable '" + x + "' during evaluation");
    return it->second;
  };
  if (auto o = t.as<term::OpApp>()) {
    auto sig = th_->sig.lookup(o->symbol);
    if (!sig) throw ModelError("unknown symbol '" + o->symbol + "'");
    check_symbol(*sig);
    std::vector<Value> args;
    for (auto& a : o->args) args.push_back(eval(a, env));
    return apply_op(o->symbol, args);
  }
  if (auto v = t.as<term::Var>()) return in_env(v->name);
  if (t.as<term::Star>()) return Value::unit();
  if (auto u = t.as<term::UnitLet>()) {
    eval(u->scrutinee, env);
    return eval(u->body, env);
  }
  if (auto p = t.as<term::TensorPair>()) return Value::pair(eval(p->left, env), eval(p->right, env));
  if (auto l = t.as<term::TensorLet>()) {
    Value s = eval(l->scrutinee, env);
    auto e2 = env;
    e2[l->left_var] = s.first();
    e2[l->right_var] = s.second();
    return eval(l->body, e2);
  }
  if (auto l = t.as<term::Lambda>()) {
    std::vector<Value> table;
    auto e2 = env;
    for (auto& x : points(l->type)) {
      e2[l->var] = x;
      table.push_back(eval(l->body, e2));
    }
    return Value::fun(std::move(table), index_map(l->type));
  }
  if (auto a = t.as<term::App>()) {
    Value f = eval(a->fn, env);
    return f.apply(eval(a->arg, env));
  }
  if (auto p = t.as<term::Promote>()) {
    if (collapses(p->grade)) return Value::unit();
    auto e2 = env;
    for (std::size_t i = 0; i < p->args.size(); ++i) {
      Value v = eval(p->args[i], env);
      e2[p->binders[i]] = collapses(p->arg_grades[i]) ? Value::unit() : v;
    }
    std::map<std::string, Value> body_env;
    for (auto& x : p->binders) body_env[x] = e2[x];
    return eval(p->body, body_env);
  }
  if (auto d = t.as<term::Derelict>()) return eval(d->operand, env);
  if (auto d = t.as<term::Discard>()) {
    eval(d->scrutinee, env);
    return eval(d->body, env);
  }
  auto c = t.as<term::Copy>();
  Value s = eval(c->scrutinee, env);
  auto e2 = env;
  e2[c->left_var] = collapses(c->left_grade) ? Value::unit() : s;
  e2[c->right_var] = collapses(c->right_grade) ? Value::unit() : s;
  return eval(c->body, e2);
}

}  // namespace gvlam

namespace gvlam {

std::vector<std::vector<Value>> MetModel::context_points(const Context& ctx) const {
  std::vector<std::vector<Value>> out{{}};
  for (auto& b : ctx.bindings()) {
    const auto& ps = points(b.type);
    if (out.size() * ps.size() > guard_)
      throw GuardExceeded("context " + to_string(ctx) + " has more points than the guard of " + std::to_string(guard_));
    std::vector<std::vector<Value>> next;
    next.reserve(out.size() * ps.size());
    for (auto& prefix : out)
      for (auto& p : ps) {
        next.push_back(prefix);
        next.back().push_back(p);
      }
    out = std::move(next);
  }
  return out;
}

ExtRational MetModel::context_dist(const Context& ctx, const std::vector<Value>& a, const std::vector<Value>& b) const {
  ExtRational d(0);
  for (std::size_t i = 0; i < ctx.size(); ++i) d = combine(d, dist(ctx[i].type, a[i], b[i]));
  return d;
}

MetMap MetModel::interp(const Derivation& d) const { return interp(d.concl.ctx, d.concl.term); }

MetMap MetModel::interp(const Context& ctx, const Term& v) const {
  Derivation d = infer(th_->sig, ctx, v);
  MetMap m;
  m.ctx = ctx;
  m.cod = d.concl.type;
  m.dom = context_points(ctx);
  std::map<std::vector<Value>, std::size_t> pos;
  for (std::size_t i = 0; i < m.dom.size(); ++i) {
    std::map<std::string, Value> env;
    for (std::size_t j = 0; j < ctx.size(); ++j) env[ctx[j].name] = m.dom[i][j];
    m.table.push_back(eval(v, env));
    pos[m.dom[i]] = i;
  }
  // Non-expansive: pairs differing in one coordinate suffice (triangle
  // inequality in the codomain).
  for (std::size_t i = 0; i < m.dom.size(); ++i)
    for (std::size_t j = 0; j < ctx.size(); ++j)
      for (auto& y : points(ctx[j].type)) {
        auto q = m.dom[i];
        if (q[j] == y) continue;
        q[j] = y;
        std::size_t k = pos.at(q);
        if (k < i) continue;
        if (dist(m.cod, m.table[i], m.table[k]) > dist(ctx[j].type, m.dom[i][j], y))
          throw ModelError("denotation of " + to_string(v) + " is not non-expansive");
      }
  return m;
}

ExtRational hom_distance(const MetModel& m, const MetMap& f, const MetMap& g) {
  if (!(f.ctx == g.ctx) || !(f.cod == g.cod)) throw ModelError("hom_distance: maps have different domains or codomains");
  ExtRational sup(0);
  for (std::size_t i = 0; i < f.table.size(); ++i) sup = max(sup, m.dist(f.cod, f.table[i], g.table[i]));
  return sup;
}

bool within_bound(const ExtRational& distance, const QuantaleValue& q) {
  if (q.kind() == QuantaleKind::boolean) throw ModelError("metric distances cannot be compared with boolean bounds");
  return compare(Magnitude(distance), q.magnitude()) <= 0;
}

AxiomCheck check_axiom(const MetModel& m, const AxiomInstance& inst) {
  MetMap l = m.interp(inst.ctx, inst.lhs);
  MetMap r = m.interp(inst.ctx, inst.rhs);
  AxiomCheck c;
  c.distance = hom_distance(m, l, r);
  c.ok = within_bound(c.distance, inst.bound);
  return c;
}

}  // namespace gvlam
