#pragma once

// Quantitative equations  ctx |- v =[q] w : A  and their derivations.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gvlam/equational.hpp"
#include "gvlam/sexpr.hpp"
#include "gvlam/theory.hpp"

namespace gvlam {

struct VEquation {
  Context ctx;
  Term lhs;
  Term rhs;
  Type type;
  QuantaleValue bound;
};

// "ctx |- lhs =[q] rhs : A"
std::string to_string(const VEquation& e);
// Bound, followed by its enclosure when it is symbolic.
std::string bound_report(const VEquation& e);

enum class ProofKind {
  refl,
  trans,
  weak,
  join,
  sym,
  perm,
  axiom,
  step,
  cong_op,
  cong_unit_let,
  cong_pair,
  cong_tensor_let,
  cong_lambda,
  cong_app,
  cong_derelict,
  cong_discard,
  cong_copy,
  cong_promote,
  cong_subst,
};

std::string proof_kind_name(ProofKind k);
std::optional<ProofKind> parse_proof_kind(const std::string& s);

struct VProof {
  ProofKind kind = ProofKind::refl;
  std::vector<VProof> premises;
  // refl, perm, step; optional interleaving for congruences.
  std::optional<Context> ctx;
  // refl, step.
  Term term;
  // weak.
  std::optional<QuantaleValue> q;
  // axiom name, cong-op symbol, cong-subst variable.
  std::string name;
  // axiom.
  ParamEnv params;
  // step; `flip` concludes rewritten =k original.
  std::optional<RewriteStep> step;
  bool flip = false;
  // cong-promote.
  Grade grade;
  // Conclusion, filled by annotate and checked by validate when present.
  std::optional<VEquation> concl;
};

std::size_t proof_size(const VProof& p);

// Recomputes the conclusion bottom-up. Throws ProofError carrying the path
// of the offending node (premise indices from the root).
VEquation validate(const Theory& th, const VProof& p);
// Copy of `p` with every node's conclusion filled in.
VProof annotate(const Theory& th, const VProof& p);

VProof parse_proof(const Theory& th, const SExpr& e);
VProof parse_proof(const Theory& th, std::string_view text);
SExpr proof_to_sexpr(const VProof& p);
std::string to_string(const VProof& p);

struct SynthOptions {
  bool normalize_first = false;
  std::size_t fuel = 10000;
  std::size_t max_depth = 512;
};

struct SynthResult {
  VEquation eq;
  VProof proof;
};

// Throws TypeError when the sides do not typecheck to one type in ctx;
// returns nullopt when no proof is found.
std::optional<SynthResult> synthesize(const Theory& th, const Context& ctx, const Term& v, const Term& w,
                                      const SynthOptions& opt = {});

}  // namespace gvlam
