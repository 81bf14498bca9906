#pragma once

// Abstract syntax of the graded linear lambda calculus.
//
//   A ::= X | I | A * A | A -o A | !r A
//
// Terms and types are immutable trees with shared subtrees; copying a Term or
// Type handle is cheap.

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gvlam/quantale.hpp"

namespace gvlam {

struct TypeNode;

class Type {
 public:
  Type() = default;
  explicit Type(std::shared_ptr<const TypeNode> node) : node_(std::move(node)) {}

  const TypeNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  explicit operator bool() const { return static_cast<bool>(node_); }

 private:
  std::shared_ptr<const TypeNode> node_;
};

namespace type {
struct Ground {
  std::string name;
};
struct Unit {};
struct Tensor {
  Type left, right;
};
struct Lolli {
  Type domain, codomain;
};
struct Bang {
  Grade grade;
  Type body;
};
}  // namespace type

struct TypeNode {
  std::variant<type::Ground, type::Unit, type::Tensor, type::Lolli, type::Bang> v;
};

template <class T>
const T* Type::as() const {
  return std::get_if<T>(&node_->v);
}

Type ground_type(std::string name);
Type unit_type();
Type tensor_type(Type a, Type b);
Type lolli_type(Type a, Type b);
Type bang_type(Grade r, Type a);

bool operator==(const Type& a, const Type& b);
std::string to_string(const Type& t);

struct TermNode;

class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  const TermNode& node() const { return *node_; }
  template <class T>
  const T* as() const;
  explicit operator bool() const { return static_cast<bool>(node_); }
  // Identity of the underlying node (not structural equality).
  bool same_node(const Term& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<const TermNode> node_;
};

namespace term {
struct OpApp {
  std::string symbol;
  std::vector<Term> args;
};
struct Var {
  std::string name;
};
struct Star {};
// let unit = scrutinee in body
struct UnitLet {
  Term scrutinee, body;
};
struct TensorPair {
  Term left, right;
};
// let left_var (*) right_var = scrutinee in body
struct TensorLet {
  Term scrutinee;
  std::string left_var, right_var;
  Term body;
};
struct Lambda {
  std::string var;
  Type type;
  Term body;
};
struct App {
  Term fn, arg;
};
// promote[grade; arg_grades](args; binders => body)
struct Promote {
  Grade grade;
  std::vector<Grade> arg_grades;
  std::vector<Term> args;
  std::vector<std::string> binders;
  Term body;
};
struct Derelict {
  Term operand;
};
// discard scrutinee in body
struct Discard {
  Term scrutinee, body;
};
// copy[left_grade, right_grade] scrutinee as left_var, right_var in body
struct Copy {
  Grade left_grade, right_grade;
  Term scrutinee;
  std::string left_var, right_var;
  Term body;
};
}  // namespace term

struct TermNode {
  std::variant<term::OpApp, term::Var, term::Star, term::UnitLet, term::TensorPair, term::TensorLet, term::Lambda,
               term::App, term::Promote, term::Derelict, term::Discard, term::Copy>
      v;
};

template <class T>
const T* Term::as() const {
  return std::get_if<T>(&node_->v);
}

Term op_app(std::string symbol, std::vector<Term> args);
Term var(std::string name);
Term star();
Term unit_let(Term scrutinee, Term body);
Term tensor_pair(Term left, Term right);
Term tensor_let(Term scrutinee, std::string left_var, std::string right_var, Term body);
Term lambda(std::string var, Type type, Term body);
Term app(Term fn, Term arg);
Term promote(Grade grade, std::vector<Grade> arg_grades, std::vector<Term> args, std::vector<std::string> binders,
             Term body);
Term derelict(Term operand);
Term discard(Term scrutinee, Term body);
Term copy(Grade left_grade, Grade right_grade, Term scrutinee, std::string left_var, std::string right_var, Term body);

// Immediate subterms in position order. Positions: OpApp args 0..n-1;
// UnitLet/TensorLet/Discard/Copy scrutinee 0, body 1; TensorPair 0, 1;
// Lambda body 0; App fn 0, arg 1; Promote args 0..n-1, body n; Derelict 0.
std::vector<Term> children(const Term& t);
// Names bound by `t` in its i-th child.
std::vector<std::string> binders_of_child(const Term& t, std::size_t i);
Term with_children(const Term& t, const std::vector<Term>& kids);

// Subterm at `path`; throws RewriteError when the path leaves the tree.
Term subterm_at(const Term& t, const std::vector<std::size_t>& path);
Term replace_at(const Term& t, const std::vector<std::size_t>& path, const Term& replacement);

std::size_t term_size(const Term& t);

// Structural (not alpha) equality; binder names must match.
bool syntactically_equal(const Term& a, const Term& b);
bool alpha_eq(const Term& a, const Term& b);

// Free variable occurrence counts.
std::map<std::string, int> free_var_counts(const Term& t);
// Free variables in order of first occurrence.
std::vector<std::string> free_vars(const Term& t);
bool occurs_free(const std::string& x, const Term& t);
std::set<std::string> all_names(const Term& t);

// Smallest name of the form base<k> (base with trailing digits stripped) not in `avoid`.
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid);

// Capture-avoiding substitution t[w/x].
Term substitute(const Term& t, const Term& w, const std::string& x);
// Simultaneous substitution t[w1/x1, ..., wn/xn].
Term substitute(const Term& t, const std::map<std::string, Term>& sigma);
// Renames bound variables of `t` so none collides with `avoid`.
Term rename_binders_avoiding(const Term& t, const std::set<std::string>& avoid);

std::string to_string(const Term& t);

struct Binding {
  std::string name;
  Type type;
  friend bool operator==(const Binding& a, const Binding& b) { return a.name == b.name && a.type == b.type; }
};

// Ordered list of typed variables with pairwise distinct names.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<Binding> bindings);

  const std::vector<Binding>& bindings() const { return bindings_; }
  std::size_t size() const { return bindings_.size(); }
  bool empty() const { return bindings_.empty(); }
  const Binding& operator[](std::size_t i) const { return bindings_[i]; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_of(name).has_value(); }
  std::vector<std::string> names() const;

  Context extended(Binding b) const;
  Context concat(const Context& other) const;
  Context without(const std::string& name) const;
  Context swapped(std::size_t i) const;
  Context restricted_to(const std::set<std::string>& names) const;

  friend bool operator==(const Context& a, const Context& b) { return a.bindings_ == b.bindings_; }

 private:
  std::vector<Binding> bindings_;
};

std::string to_string(const Context& c);

// True when `whole` interleaves `parts` preserving each part's internal order.
bool is_shuffle(const Context& whole, const std::vector<Context>& parts);
// All interleavings; count is the multinomial coefficient of the part sizes.
std::vector<Context> enumerate_shuffles(const std::vector<Context>& parts);
// Assignment of each position of `whole` to a part, when `whole` is a shuffle.
std::optional<std::vector<std::size_t>> shuffle_split(const Context& whole, const std::vector<Context>& parts);

// Whether a context is the same list up to permutation.
bool is_permutation(const Context& a, const Context& b);

}  // namespace gvlam
