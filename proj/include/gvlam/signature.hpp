#pragma once

// Ground types and sorted operation symbols f : A1, ..., An -> A (n >= 1).
// Besides plain symbols a signature holds families such as
//   family wait[n] : X -> X
// whose instances wait_0, wait_1, ... are resolved on demand.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gvlam/expr.hpp"
#include "gvlam/syntax.hpp"

namespace gvlam {

struct OpSig {
  std::string symbol;
  std::vector<Type> arity;
  Type result;
  // Set for family instances.
  std::string family;
  std::vector<Rational> params;
};

enum class ParamKind { nat, rat };

struct FamilyParam {
  std::string name;
  ParamKind kind = ParamKind::nat;
};

struct OpFamily {
  std::string base;
  std::vector<FamilyParam> params;
  std::vector<std::string> arity_templates;
  std::string result_template;
  Condition condition;
};

class Signature {
 public:
  Signature() = default;
  explicit Signature(Semiring semiring) : semiring_(semiring) {}

  const Semiring& semiring() const { return semiring_; }

  void add_ground(const std::string& name);
  void add_op(const std::string& symbol, std::vector<Type> arity, Type result);
  void add_family(OpFamily family);

  const std::set<std::string>& grounds() const { return grounds_; }
  const std::map<std::string, OpSig>& ops() const { return ops_; }
  const std::map<std::string, OpFamily>& families() const { return families_; }

  // Resolves a plain symbol or a family instance.
  std::optional<OpSig> lookup(const std::string& symbol) const;

  // Throws TypeError when a type mentions an undeclared ground or a grade
  // outside the semiring.
  void check_type(const Type& t) const;

  // Instance name for a family and parameter values.
  static std::string instance_name(const std::string& base, const std::vector<Rational>& params);

 private:
  std::optional<OpSig> instantiate(const OpFamily& f, const std::vector<std::string>& segs) const;

  Semiring semiring_;
  std::set<std::string> grounds_;
  std::map<std::string, OpSig> ops_;
  std::map<std::string, OpFamily> families_;
};

// Parses "A1, ..., An -> B" (arity and result).
std::pair<std::vector<std::string>, std::string> split_op_type(const std::string& text);

}  // namespace gvlam
