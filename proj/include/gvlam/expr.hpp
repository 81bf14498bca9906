#pragma once

// Parameter arithmetic used by schematic axioms and operation families:
// bound expressions such as "abs(n-m)" or "4*k/(m+n) + phi(k,mu1,s1,mu2,s2)",
// side conditions such as "k <= m+n and s1 > 0", and identifier templates such
// as "wait_{n+m}".

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gvlam/quantale.hpp"
#include "gvlam/rational.hpp"

namespace gvlam {

using ParamEnv = std::map<std::string, Rational>;

struct ExprNode;

class Expr {
 public:
  Expr() = default;
  static Expr parse(std::string_view text);

  // Value of an expression built only from rational arithmetic.
  Rational eval_rational(const ParamEnv& env) const;
  // Value as a non-negative extended real; admits `inf` and `phi(...)`.
  Magnitude eval_magnitude(const ParamEnv& env) const;
  bool empty() const { return !node_; }
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const ExprNode> node_;
  std::string text_;
};

// Conjunction of comparisons; the empty condition holds.
class Condition {
 public:
  Condition() = default;
  static Condition parse(std::string_view text);
  bool holds(const ParamEnv& env) const;
  const std::string& text() const { return text_; }

 private:
  struct Cmp {
    Expr lhs;
    std::string op;
    Expr rhs;
  };
  std::vector<Cmp> parts_;
  std::string text_;
};

// Splits an identifier at its "_" segments: "wait_{n+m}" -> {"wait", "{n+m}"}.
std::vector<std::string> identifier_segments(std::string_view ident);

// Replaces parameter names in `text`: whole words equal to a parameter, and
// "_"-segments of identifiers equal to a parameter or of the form {expr}.
std::string instantiate_template(std::string_view text, const ParamEnv& env);

// Printed form of a parameter value inside identifiers ("3", "-1", "1/2").
std::string param_literal(const Rational& q);

}  // namespace gvlam
