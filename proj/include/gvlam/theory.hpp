#pragma once

// Graded theories loaded from line-oriented files:
//
//   quantale metric
//   semiring nat
//   symmetric true
//   ground X
//   op join : X, X -> X
//   family wait[n] : X -> X
//   axiom wait[n,m] : [x : X] wait_n(x) =[abs(n-m)] wait_m(x)
//
// Axioms with parameters are schemata; axiom_instantiate produces instances.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gvlam/expr.hpp"
#include "gvlam/quantale.hpp"
#include "gvlam/signature.hpp"
#include "gvlam/syntax.hpp"

namespace gvlam {

struct AxiomSchema {
  std::string name;
  std::vector<FamilyParam> params;
  std::string ctx_text;
  std::string lhs_text;
  std::string rhs_text;
  Expr bound;
  Condition condition;
  std::size_t line = 0;
  // Parsed forms of the templates, used for matching. Absent when a template
  // only parses after instantiation.
  std::optional<Context> ctx_template;
  std::optional<Term> lhs_template;
  std::optional<Term> rhs_template;
};

struct AxiomInstance {
  std::string name;
  ParamEnv params;
  Context ctx;
  Term lhs;
  Term rhs;
  Type type;
  QuantaleValue bound;
};

struct Theory {
  Quantale quantale;
  Semiring semiring;
  bool symmetric = true;
  Signature sig;
  std::vector<AxiomSchema> axioms;

  const AxiomSchema* find_axiom(const std::string& name) const;
};

Theory parse_theory(std::string_view text);
Theory load_theory(const std::string& path);

// Checks parameter kinds and side conditions, typechecks both sides and
// evaluates the bound. Throws ProofError on any failure.
AxiomInstance axiom_instantiate(const Theory& th, const std::string& name, const ParamEnv& params);

// "n=1 m=2" in declaration order of `names`, or sorted when names is empty.
std::string params_to_string(const ParamEnv& env, const std::vector<FamilyParam>& names = {});

std::string read_file(const std::string& path);

}  // namespace gvlam
