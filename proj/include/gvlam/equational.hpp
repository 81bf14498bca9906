#pragma once

// The equational schema as checked, position-addressed rewrite steps, and a
// leftmost-outermost normaliser for the beta/eta/unit subset.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gvlam/error.hpp"
#include "gvlam/typechecker.hpp"

namespace gvlam {

enum class SchemaId {
  // monoidal
  pm_beta,
  pm_eta,
  unit_beta,
  unit_eta,
  // closed
  lam_beta,
  lam_eta,
  // symmetric comonad
  dr_beta,
  dr_eta,
  pr_assoc,
  pr_swap,
  // commutative comonoid
  cp_unit_left,
  cp_unit_right,
  cp_assoc,
  cp_comm,
  // comonoid / comonad interaction
  ds_pr,
  pr_ds,
  cp_pr,
  pr_cp,
  // commuting conversions
  cc_unit,
  cc_pm,
  cc_ds,
  cc_cp,
};

const std::vector<SchemaId>& all_schemas();
std::string schema_name(SchemaId s);
std::optional<SchemaId> parse_schema(const std::string& name);
// "monoidal", "closed", "comonad", "comonoid", "interaction", "commuting".
std::string schema_group(SchemaId s);

enum class Direction { l2r, r2l };

// Extra data for rows whose matching would be higher order. Paths in `holes`
// are relative to the rewritten subterm (or to a body, see docs/proofs.md).
struct StepBindings {
  std::vector<Path> holes;
  std::vector<std::string> names;
  std::optional<std::size_t> index;
  std::map<std::string, Term> terms;
  std::vector<Grade> grades;
};

struct RewriteStep {
  SchemaId schema = SchemaId::lam_beta;
  Path path;
  Direction direction = Direction::l2r;
  StepBindings bindings;
};

std::string to_string(const RewriteStep& s);

// Rewrites the subterm at step.path; the result is re-inferred and must keep
// the context and type of `d`.
Derivation apply_step(const Signature& sig, const Derivation& d, const RewriteStep& step);

// Rewrites the term of `d` itself (step.path is ignored). Fresh binders avoid
// the names in `avoid`.
Term rewrite_term(const Signature& sig, const Derivation& d, const RewriteStep& step,
                  const std::set<std::string>& avoid);

struct NormalizeResult {
  Derivation result;
  std::vector<RewriteStep> steps;
  bool fuel_exhausted = false;
};

// Schemas oriented left to right by the normaliser.
const std::vector<SchemaId>& normalizing_schemas();

NormalizeResult beta_normalize(const Signature& sig, const Derivation& d, std::size_t fuel);
// First redex in leftmost-outermost order, if any.
std::optional<RewriteStep> find_redex(const Term& t);

enum class Side { lhs, rhs };

struct ScriptStep {
  Side side = Side::lhs;
  RewriteStep step;
};

// Applies each step to its side and tests the two results for alpha equality.
bool eq_script_check(const Signature& sig, const Derivation& lhs, const Derivation& rhs,
                     const std::vector<ScriptStep>& steps);

// Premise of `d` addressed by a term path.
const Derivation& derivation_at(const Derivation& d, const Path& path);

}  // namespace gvlam
