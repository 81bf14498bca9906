#pragma once

// Typing derivations. Every judgement ctx |- v : A has at most one derivation;
// infer reconstructs it by splitting the context according to which subterm
// owns each free variable.

#include <string>
#include <vector>

#include "gvlam/signature.hpp"
#include "gvlam/syntax.hpp"

namespace gvlam {

enum class Rule { ax, hp, I_i, I_e, tensor_i, tensor_e, lolli_i, lolli_e, bang_i, bang_e, bang_0, bang_sum };

std::string rule_name(Rule r);

struct Judgement {
  Context ctx;
  Term term;
  Type type;
};

std::string to_string(const Judgement& j);

struct Derivation {
  Rule rule = Rule::hp;
  Judgement concl;
  std::vector<Derivation> premises;
  // split[i] is the premise receiving conclusion variable i.
  std::vector<std::size_t> split;
};

// Node-for-node identity, terms compared syntactically.
bool same_derivation(const Derivation& a, const Derivation& b);
std::size_t derivation_size(const Derivation& d);

Derivation infer(const Signature& sig, const Context& ctx, const Term& v);
Derivation check(const Signature& sig, const Context& ctx, const Term& v, const Type& a);

// Derivation of the judgement with context positions i and i+1 swapped.
Derivation exchange(const Derivation& d, std::size_t i);

// From d : G, x : A |- v : B and e : D |- w : A builds G, D |- v[w/x] : B.
// Variables of D clashing with G are renamed first.
Derivation subst_derivation(const Derivation& d, const Derivation& e);

// Renames a context variable throughout a derivation; `to` must be fresh.
Derivation rename_variable(const Derivation& d, const std::string& from, const std::string& to);

// (rule "judgement" :split (..) premises...)
std::string to_sexpr(const Derivation& d, int indent = 0);

}  // namespace gvlam
