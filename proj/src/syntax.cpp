#include "gvlam/syntax.hpp"

#include <algorithm>
#include <functional>

#include "gvlam/error.hpp"

namespace gvlam {

namespace {

template <class T>
Type make_type(T node) {
  return Type(std::make_shared<const TypeNode>(TypeNode{std::move(node)}));
}

template <class T>
Term make_term(T node) {
  return Term(std::make_shared<const TermNode>(TermNode{std::move(node)}));
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

Type ground_type(std::string name) { return make_type(type::Ground{std::move(name)}); }
Type unit_type() { return make_type(type::Unit{}); }
Type tensor_type(Type a, Type b) { return make_type(type::Tensor{std::move(a), std::move(b)}); }
Type lolli_type(Type a, Type b) { return make_type(type::Lolli{std::move(a), std::move(b)}); }
Type bang_type(Grade r, Type a) { return make_type(type::Bang{r, std::move(a)}); }

bool operator==(const Type& a, const Type& b) {
  if (!a || !b) return !a && !b;
  return std::visit(
      overloaded{
          [&](const type::Ground& g) {
            auto o = b.as<type::Ground>();
            return o && o->name == g.name;
          },
          [&](const type::Unit&) { return b.as<type::Unit>() != nullptr; },
          [&](const type::Tensor& t) {
            auto o = b.as<type::Tensor>();
            return o && o->left == t.left && o->right == t.right;
          },
          [&](const type::Lolli& t) {
            auto o = b.as<type::Lolli>();
            return o && o->domain == t.domain && o->codomain == t.codomain;
          },
          [&](const type::Bang& t) {
            auto o = b.as<type::Bang>();
            return o && o->grade == t.grade && o->body == t.body;
          },
      },
      a.node().v);
}

namespace {

// Precedence levels: 0 lolli, 1 tensor, 2 bang/atom.
std::string type_str(const Type& t, int level) {
  std::string out;
  int mine = 2;
  if (auto g = t.as<type::Ground>()) {
    out = g->name;
  } else if (t.as<type::Unit>()) {
    out = "I";
  } else if (auto p = t.as<type::Tensor>()) {
    mine = 1;
    out = type_str(p->left, 1) + " * " + type_str(p->right, 2);
  } else if (auto l = t.as<type::Lolli>()) {
    mine = 0;
    out = type_str(l->domain, 1) + " -o " + type_str(l->codomain, 0);
  } else if (auto b = t.as<type::Bang>()) {
    out = "!" + to_string(b->grade) + " " + type_str(b->body, 2);
  }
  if (mine < level) return "(" + out + ")";
  return out;
}

}  // namespace

std::string to_string(const Type& t) { return type_str(t, 0); }

// ---------------------------------------------------------------------------
// Term constructors

Term op_app(std::string symbol, std::vector<Term> args) {
  return make_term(term::OpApp{std::move(symbol), std::move(args)});
}
Term var(std::string name) { return make_term(term::Var{std::move(name)}); }
Term star() { return make_term(term::Star{}); }
Term unit_let(Term scrutinee, Term body) { return make_term(term::UnitLet{std::move(scrutinee), std::move(body)}); }
Term tensor_pair(Term left, Term right) { return make_term(term::TensorPair{std::move(left), std::move(right)}); }
Term tensor_let(Term scrutinee, std::string left_var, std::string right_var, Term body) {
  return make_term(term::TensorLet{std::move(scrutinee), std::move(left_var), std::move(right_var), std::move(body)});
}
Term lambda(std::string v, Type type, Term body) {
  return make_term(term::Lambda{std::move(v), std::move(type), std::move(body)});
}
Term app(Term fn, Term arg) { return make_term(term::App{std::move(fn), std::move(arg)}); }
Term promote(Grade grade, std::vector<Grade> arg_grades, std::vector<Term> args, std::vector<std::string> binders,
             Term body) {
  if (arg_grades.size() != args.size() || args.size() != binders.size())
    throw Error("promote needs as many grades, arguments and binders");
  return make_term(
      term::Promote{grade, std::move(arg_grades), std::move(args), std::move(binders), std::move(body)});
}
Term derelict(Term operand) { return make_term(term::Derelict{std::move(operand)}); }
Term discard(Term scrutinee, Term body) { return make_term(term::Discard{std::move(scrutinee), std::move(body)}); }
Term copy(Grade left_grade, Grade right_grade, Term scrutinee, std::string left_var, std::string right_var,
          Term body) {
  return make_term(term::Copy{left_grade, right_grade, std::move(scrutinee), std::move(left_var),
                              std::move(right_var), std::move(body)});
}

// ---------------------------------------------------------------------------
// Positions

std::vector<Term> children(const Term& t) {
  return std::visit(overloaded{
                        [](const term::OpApp& n) { return n.args; },
                        [](const term::Var&) { return std::vector<Term>{}; },
                        [](const term::Star&) { return std::vector<Term>{}; },
                        [](const term::UnitLet& n) { return std::vector<Term>{n.scrutinee, n.body}; },
                        [](const term::TensorPair& n) { return std::vector<Term>{n.left, n.right}; },
                        [](const term::TensorLet& n) { return std::vector<Term>{n.scrutinee, n.body}; },
                        [](const term::Lambda& n) { return std::vector<Term>{n.body}; },
                        [](const term::App& n) { return std::vector<Term>{n.fn, n.arg}; },
                        [](const term::Promote& n) {
                          auto kids = n.args;
                          kids.push_back(n.body);
                          return kids;
                        },
                        [](const term::Derelict& n) { return std::vector<Term>{n.operand}; },
                        [](const term::Discard& n) { return std::vector<Term>{n.scrutinee, n.body}; },
                        [](const term::Copy& n) { return std::vector<Term>{n.scrutinee, n.body}; },
                    },
                    t.node().v);
}

std::vector<std::string> binders_of_child(const Term& t, std::size_t i) {
  if (auto n = t.as<term::TensorLet>(); n && i == 1) return {n->left_var, n->right_var};
  if (auto n = t.as<term::Lambda>(); n && i == 0) return {n->var};
  if (auto n = t.as<term::Promote>(); n && i == n->args.size()) return n->binders;
  if (auto n = t.as<term::Copy>(); n && i == 1) return {n->left_var, n->right_var};
  return {};
}

Term with_children(const Term& t, const std::vector<Term>& kids) {
  auto need = [&](std::size_t n) {
    if (kids.size() != n) throw RewriteError("wrong number of children");
  };
  return std::visit(overloaded{
                        [&](const term::OpApp& n) {
                          need(n.args.size());
                          return op_app(n.symbol, kids);
                        },
                        [&](const term::Var&) {
                          need(0);
                          return t;
                        },
                        [&](const term::Star&) {
                          need(0);
                          return t;
                        },
                        [&](const term::UnitLet&) {
                          need(2);
                          return unit_let(kids[0], kids[1]);
                        },
                        [&](const term::TensorPair&) {
                          need(2);
                          return tensor_pair(kids[0], kids[1]);
                        },
                        [&](const term::TensorLet& n) {
                          need(2);
                          return tensor_let(kids[0], n.left_var, n.right_var, kids[1]);
                        },
                        [&](const term::Lambda& n) {
                          need(1);
                          return lambda(n.var, n.type, kids[0]);
                        },
                        [&](const term::App&) {
                          need(2);
                          return app(kids[0], kids[1]);
                        },
                        [&](const term::Promote& n) {
                          need(n.args.size() + 1);
                          std::vector<Term> args(kids.begin(), kids.end() - 1);
                          return promote(n.grade, n.arg_grades, args, n.binders, kids.back());
                        },
                        [&](const term::Derelict&) {
                          need(1);
                          return derelict(kids[0]);
                        },
                        [&](const term::Discard&) {
                          need(2);
                          return discard(kids[0], kids[1]);
                        },
                        [&](const term::Copy& n) {
                          need(2);
                          return copy(n.left_grade, n.right_grade, kids[0], n.left_var, n.right_var, kids[1]);
                        },
                    },
                    t.node().v);
}

Term subterm_at(const Term& t, const std::vector<std::size_t>& path) {
  Term cur = t;
  for (std::size_t k = 0; k < path.size(); ++k) {
    auto kids = children(cur);
    if (path[k] >= kids.size())
      throw RewriteError("position " + format_path(path) + " leaves the term at depth " + std::to_string(k));
    cur = kids[path[k]];
  }
  return cur;
}

Term replace_at(const Term& t, const std::vector<std::size_t>& path, const Term& replacement) {
  std::function<Term(const Term&, std::size_t)> go = [&](const Term& cur, std::size_t depth) -> Term {
    if (depth == path.size()) return replacement;
    auto kids = children(cur);
    if (path[depth] >= kids.size()) throw RewriteError("position " + format_path(path) + " leaves the term");
    kids[path[depth]] = go(kids[path[depth]], depth + 1);
    return with_children(cur, kids);
  };
  return go(t, 0);
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1;
  for (const auto& c : children(t)) n += term_size(c);
  return n;
}

// ---------------------------------------------------------------------------
// Equality

namespace {

// Local (non-child) data of a node, compared by both equality notions.
bool same_shape(const Term& a, const Term& b) {
  if (a.node().v.index() != b.node().v.index()) return false;
  if (auto x = a.as<term::OpApp>()) return x->symbol == b.as<term::OpApp>()->symbol && x->args.size() == b.as<term::OpApp>()->args.size();
  if (auto x = a.as<term::Lambda>()) return x->type == b.as<term::Lambda>()->type;
  if (auto x = a.as<term::Promote>()) {
    auto y = b.as<term::Promote>();
    return x->grade == y->grade && x->arg_grades == y->arg_grades;
  }
  if (auto x = a.as<term::Copy>()) {
    auto y = b.as<term::Copy>();
    return x->left_grade == y->left_grade && x->right_grade == y->right_grade;
  }
  return true;
}

using Scope = std::vector<std::pair<std::string, std::string>>;

bool alpha_rec(const Term& a, const Term& b, Scope& scope) {
  if (!same_shape(a, b)) return false;
  if (auto x = a.as<term::Var>()) {
    const auto& y = b.as<term::Var>()->name;
    for (std::size_t i = scope.size(); i-- > 0;) {
      bool left = scope[i].first == x->name;
      bool right = scope[i].second == y;
      if (left || right) return left && right;
    }
    return x->name == y;
  }
  auto ka = children(a);
  auto kb = children(b);
  for (std::size_t i = 0; i < ka.size(); ++i) {
    auto ba = binders_of_child(a, i);
    auto bb = binders_of_child(b, i);
    for (std::size_t j = 0; j < ba.size(); ++j) scope.emplace_back(ba[j], bb[j]);
    bool ok = alpha_rec(ka[i], kb[i], scope);
    scope.resize(scope.size() - ba.size());
    if (!ok) return false;
  }
  return true;
}

}  // namespace

bool syntactically_equal(const Term& a, const Term& b) {
  if (a.same_node(b)) return true;
  if (!same_shape(a, b)) return false;
  if (auto x = a.as<term::Var>()) return x->name == b.as<term::Var>()->name;
  auto ka = children(a);
  auto kb = children(b);
  for (std::size_t i = 0; i < ka.size(); ++i) {
    if (binders_of_child(a, i) != binders_of_child(b, i)) return false;
    if (!syntactically_equal(ka[i], kb[i])) return false;
  }
  return true;
}

bool alpha_eq(const Term& a, const Term& b) {
  Scope scope;
  return alpha_rec(a, b, scope);
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_free(const Term& t, std::vector<std::string>& bound, std::map<std::string, int>& counts,
                  std::vector<std::string>& order) {
  if (auto v = t.as<term::Var>()) {
    if (std::find(bound.begin(), bound.end(), v->name) != bound.end()) return;
    if (counts[v->name]++ == 0) order.push_back(v->name);
    return;
  }
  auto kids = children(t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto bs = binders_of_child(t, i);
    bound.insert(bound.end(), bs.begin(), bs.end());
    collect_free(kids[i], bound, counts, order);
    bound.resize(bound.size() - bs.size());
  }
}

void collect_names(const Term& t, std::set<std::string>& out) {
  if (auto v = t.as<term::Var>()) out.insert(v->name);
  auto kids = children(t);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    for (auto& b : binders_of_child(t, i)) out.insert(b);
    collect_names(kids[i], out);
  }
}

}  // namespace

std::map<std::string, int> free_var_counts(const Term& t) {
  std::vector<std::string> bound, order;
  std::map<std::string, int> counts;
  collect_free(t, bound, counts, order);
  return counts;
}

std::vector<std::string> free_vars(const Term& t) {
  std::vector<std::string> bound, order;
  std::map<std::string, int> counts;
  collect_free(t, bound, counts, order);
  return order;
}

bool occurs_free(const std::string& x, const Term& t) { return free_var_counts(t).count(x) > 0; }

std::set<std::string> all_names(const Term& t) {
  std::set<std::string> out;
  collect_names(t, out);
  return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
  std::string stem = base;
  while (!stem.empty() && stem.back() >= '0' && stem.back() <= '9') stem.pop_back();
  if (stem.empty()) stem = "v";
  for (std::size_t k = 1;; ++k) {
    std::string candidate = stem + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Substitution

namespace {

Term subst_rec(const Term& t, const std::map<std::string, Term>& sigma, const std::set<std::string>& range_fv) {
  if (sigma.empty()) return t;
  if (auto v = t.as<term::Var>()) {
    auto it = sigma.find(v->name);
    return it == sigma.end() ? t : it->second;
  }
  auto kids = children(t);
  bool has_binders = false;
  for (std::size_t i = 0; i < kids.size(); ++i) has_binders |= !binders_of_child(t, i).empty();
  if (!has_binders) {
    for (auto& k : kids) k = subst_rec(k, sigma, range_fv);
    return with_children(t, kids);
  }

  // Rename binders that would capture a free variable of the substituted terms.
  std::map<std::string, std::string> renames;
  std::set<std::string> avoid = range_fv;
  for (auto& [k, _] : sigma) avoid.insert(k);
  for (auto& n : all_names(t)) avoid.insert(n);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    for (auto& b : binders_of_child(t, i)) {
      if (range_fv.count(b) && !renames.count(b)) {
        std::string fresh = fresh_name(b, avoid);
        avoid.insert(fresh);
        renames[b] = fresh;
      }
    }
  }
  auto rename = [&](const std::string& b) {
    auto it = renames.find(b);
    return it == renames.end() ? b : it->second;
  };

  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto bs = binders_of_child(t, i);
    if (bs.empty()) {
      kids[i] = subst_rec(kids[i], sigma, range_fv);
      continue;
    }
    std::map<std::string, Term> inner = sigma;
    std::map<std::string, Term> renaming;
    for (auto& b : bs) {
      inner.erase(b);
      if (renames.count(b)) renaming[b] = var(renames[b]);
    }
    Term body = kids[i];
    if (!renaming.empty()) {
      std::set<std::string> rfv;
      for (auto& [_, r] : renaming) rfv.insert(r.as<term::Var>()->name);
      body = subst_rec(body, renaming, rfv);
    }
    kids[i] = subst_rec(body, inner, range_fv);
  }

  return std::visit(overloaded{
                        [&](const term::TensorLet& n) {
                          return tensor_let(kids[0], rename(n.left_var), rename(n.right_var), kids[1]);
                        },
                        [&](const term::Lambda& n) { return lambda(rename(n.var), n.type, kids[0]); },
                        [&](const term::Promote& n) {
                          std::vector<std::string> bs;
                          for (auto& b : n.binders) bs.push_back(rename(b));
                          std::vector<Term> args(kids.begin(), kids.end() - 1);
                          return promote(n.grade, n.arg_grades, args, bs, kids.back());
                        },
                        [&](const term::Copy& n) {
                          return copy(n.left_grade, n.right_grade, kids[0], rename(n.left_var),
                                      rename(n.right_var), kids[1]);
                        },
                        [&](const auto&) { return with_children(t, kids); },
                    },
                    t.node().v);
}

}  // namespace

Term substitute(const Term& t, const std::map<std::string, Term>& sigma) {
  std::set<std::string> range_fv;
  for (auto& [_, w] : sigma)
    for (auto& [name, __] : free_var_counts(w)) range_fv.insert(name);
  return subst_rec(t, sigma, range_fv);
}

Term substitute(const Term& t, const Term& w, const std::string& x) { return substitute(t, {{x, w}}); }

Term rename_binders_avoiding(const Term& t, const std::set<std::string>& avoid) {
  auto kids = children(t);
  std::set<std::string> taken = avoid;
  for (auto& n : all_names(t)) taken.insert(n);
  std::map<std::string, std::string> renames;
  for (std::size_t i = 0; i < kids.size(); ++i)
    for (auto& b : binders_of_child(t, i))
      if (avoid.count(b) && !renames.count(b)) {
        renames[b] = fresh_name(b, taken);
        taken.insert(renames[b]);
      }
  for (std::size_t i = 0; i < kids.size(); ++i) {
    std::map<std::string, Term> sigma;
    for (auto& b : binders_of_child(t, i))
      if (renames.count(b)) sigma[b] = var(renames[b]);
    Term k = sigma.empty() ? kids[i] : substitute(kids[i], sigma);
    kids[i] = rename_binders_avoiding(k, taken);
  }
  auto rename = [&](const std::string& b) {
    auto it = renames.find(b);
    return it == renames.end() ? b : it->second;
  };
  return std::visit(overloaded{
                        [&](const term::TensorLet& n) {
                          return tensor_let(kids[0], rename(n.left_var), rename(n.right_var), kids[1]);
                        },
                        [&](const term::Lambda& n) { return lambda(rename(n.var), n.type, kids[0]); },
                        [&](const term::Promote& n) {
                          std::vector<std::string> bs;
                          for (auto& b : n.binders) bs.push_back(rename(b));
                          std::vector<Term> args(kids.begin(), kids.end() - 1);
                          return promote(n.grade, n.arg_grades, args, bs, kids.back());
                        },
                        [&](const term::Copy& n) {
                          return copy(n.left_grade, n.right_grade, kids[0], rename(n.left_var),
                                      rename(n.right_var), kids[1]);
                        },
                        [&](const auto&) { return with_children(t, kids); },
                    },
                    t.node().v);
}

// ---------------------------------------------------------------------------
// Printing
//
// Levels: 0 term (binding forms reach right), 1 pair, 2 application,
// 3 prefix (derelict), 4 atom.

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string term_str(const Term& t, int level) {
  std::string out;
  int mine = 4;
  std::visit(overloaded{
                 [&](const term::OpApp& n) {
                   std::vector<std::string> args;
                   for (auto& a : n.args) args.push_back(term_str(a, 0));
                   out = n.symbol + "(" + join(args, ", ") + ")";
                 },
                 [&](const term::Var& n) { out = n.name; },
                 [&](const term::Star&) { out = "unit"; },
                 [&](const term::UnitLet& n) {
                   mine = 0;
                   out = "let unit = " + term_str(n.scrutinee, 0) + " in " + term_str(n.body, 0);
                 },
                 [&](const term::TensorPair& n) {
                   mine = 1;
                   out = term_str(n.left, 1) + " (*) " + term_str(n.right, 2);
                 },
                 [&](const term::TensorLet& n) {
                   mine = 0;
                   out = "let " + n.left_var + " (*) " + n.right_var + " = " + term_str(n.scrutinee, 0) + " in " +
                         term_str(n.body, 0);
                 },
                 [&](const term::Lambda& n) {
                   mine = 0;
                   out = "fn " + n.var + " : " + to_string(n.type) + " => " + term_str(n.body, 0);
                 },
                 [&](const term::App& n) {
                   mine = 2;
                   out = term_str(n.fn, 2) + " " + term_str(n.arg, 3);
                 },
                 [&](const term::Promote& n) {
                   if (n.args.empty()) {
                     out = "!" + to_string(n.grade) + "(" + term_str(n.body, 0) + ")";
                     return;
                   }
                   std::vector<std::string> gs, args;
                   for (auto& g : n.arg_grades) gs.push_back(to_string(g));
                   for (auto& a : n.args) args.push_back(term_str(a, 0));
                   out = "promote[" + to_string(n.grade) + "; " + join(gs, ",") + "](" + join(args, ", ") + "; " +
                         join(n.binders, ", ") + " => " + term_str(n.body, 0) + ")";
                 },
                 [&](const term::Derelict& n) {
                   mine = 3;
                   out = "derelict " + term_str(n.operand, 3);
                 },
                 [&](const term::Discard& n) {
                   mine = 0;
                   out = "discard " + term_str(n.scrutinee, 0) + " in " + term_str(n.body, 0);
                 },
                 [&](const term::Copy& n) {
                   mine = 0;
                   out = "copy[" + to_string(n.left_grade) + "," + to_string(n.right_grade) + "] " +
                         term_str(n.scrutinee, 0) + " as " + n.left_var + "," + n.right_var + " in " +
                         term_str(n.body, 0);
                 },
             },
             t.node().v);
  if (mine < level) return "(" + out + ")";
  return out;
}

}  // namespace

std::string to_string(const Term& t) { return term_str(t, 0); }

// ---------------------------------------------------------------------------
// Contexts

Context::Context(std::vector<Binding> bindings) : bindings_(std::move(bindings)) {
  std::set<std::string> seen;
  for (auto& b : bindings_)
    if (!seen.insert(b.name).second) throw Error("variable '" + b.name + "' occurs twice in context");
}

std::optional<std::size_t> Context::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < bindings_.size(); ++i)
    if (bindings_[i].name == name) return i;
  return std::nullopt;
}

std::vector<std::string> Context::names() const {
  std::vector<std::string> out;
  for (auto& b : bindings_) out.push_back(b.name);
  return out;
}

Context Context::extended(Binding b) const {
  auto bs = bindings_;
  bs.push_back(std::move(b));
  return Context(std::move(bs));
}

Context Context::concat(const Context& other) const {
  auto bs = bindings_;
  bs.insert(bs.end(), other.bindings_.begin(), other.bindings_.end());
  return Context(std::move(bs));
}

Context Context::without(const std::string& name) const {
  std::vector<Binding> bs;
  for (auto& b : bindings_)
    if (b.name != name) bs.push_back(b);
  return Context(std::move(bs));
}

Context Context::swapped(std::size_t i) const {
  if (i + 1 >= bindings_.size())
    throw Error("exchange position " + std::to_string(i) + " out of range for context of size " +
                std::to_string(bindings_.size()));
  auto bs = bindings_;
  std::swap(bs[i], bs[i + 1]);
  return Context(std::move(bs));
}

Context Context::restricted_to(const std::set<std::string>& names) const {
  std::vector<Binding> bs;
  for (auto& b : bindings_)
    if (names.count(b.name)) bs.push_back(b);
  return Context(std::move(bs));
}

std::string to_string(const Context& c) {
  std::vector<std::string> parts;
  for (auto& b : c.bindings()) parts.push_back(b.name + " : " + to_string(b.type));
  return join(parts, ", ");
}

namespace {

void require_disjoint(const std::vector<Context>& parts) {
  std::set<std::string> seen;
  for (auto& p : parts)
    for (auto& b : p.bindings())
      if (!seen.insert(b.name).second) throw Error("variable '" + b.name + "' appears in more than one part");
}

}  // namespace

std::optional<std::vector<std::size_t>> shuffle_split(const Context& whole, const std::vector<Context>& parts) {
  require_disjoint(parts);
  std::size_t total = 0;
  for (auto& p : parts) total += p.size();
  if (total != whole.size()) return std::nullopt;
  std::vector<std::size_t> next(parts.size(), 0);
  std::vector<std::size_t> split;
  for (auto& b : whole.bindings()) {
    bool placed = false;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (next[k] < parts[k].size() && parts[k][next[k]] == b) {
        ++next[k];
        split.push_back(k);
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  return split;
}

bool is_shuffle(const Context& whole, const std::vector<Context>& parts) {
  return shuffle_split(whole, parts).has_value();
}

std::vector<Context> enumerate_shuffles(const std::vector<Context>& parts) {
  require_disjoint(parts);
  std::vector<Context> out;
  std::vector<std::size_t> next(parts.size(), 0);
  std::vector<Binding> acc;
  std::size_t total = 0;
  for (auto& p : parts) total += p.size();
  std::function<void()> go = [&]() {
    if (acc.size() == total) {
      out.emplace_back(acc);
      return;
    }
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (next[k] == parts[k].size()) continue;
      acc.push_back(parts[k][next[k]++]);
      go();
      --next[k];
      acc.pop_back();
    }
  };
  go();
  return out;
}

bool is_permutation(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (auto& x : a.bindings()) {
    auto j = b.index_of(x.name);
    if (!j || !(b[*j].type == x.type)) return false;
  }
  return true;
}

}  // namespace gvlam
