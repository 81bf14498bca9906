#pragma once

// Random well-typed terms, schema instances and provable equations over the
// timed signature with max/min.

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gvlam/equational.hpp"
#include "gvlam/theory.hpp"
#include "gvlam/vequation.hpp"

namespace gvlam::testgen {

std::string data_path(const std::string& rel);
const Theory& timed_max_theory();

struct Generated {
  Context ctx;
  Term term;
  Type type;
};

class TermGen {
 public:
  explicit TermGen(std::uint64_t seed, int depth = 3) : rng_(seed), depth_(depth) {}

  // A term of type `t` over fresh variables, each used once.
  Generated term_of(const Type& t);
  Generated random_term();
  Type random_type(int depth = 1);

  // Redex for `s` in a random surrounding, with the step that rewrites it
  // left to right at the root.
  struct Instance {
    Context ctx;
    Term term;
    RewriteStep step;
  };
  Instance instance(SchemaId s);

  std::mt19937_64& rng() { return rng_; }

 private:
  struct Seed {
    Term t;
    Type ty;
  };

  int coin(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string fresh(const std::string& base);
  Term fresh_var(const Type& t);

  Term gen(const Type& t, int depth);
  // Term of type X consuming every seed exactly once.
  Term body_x(std::vector<Seed> seeds, int depth);
  Term combine(std::vector<Term> xs, int depth);
  // promote[r; ...](...) : !r X with `extra` leading binders.
  Term promote_x(std::uint64_t r, int depth, std::vector<std::pair<std::string, Grade>> extra = {},
                 std::vector<Term> extra_args = {}, const std::function<Term()>& body = {});

  std::mt19937_64 rng_;
  int depth_;
  std::size_t counter_ = 0;
  std::vector<Binding> vars_;
};

// Path of the free occurrence of `x` in `t`.
std::optional<Path> find_var(const Term& t, const std::string& x);

// Random proof over the timed_max theory; every node validates.
class ProofGen {
 public:
  explicit ProofGen(std::uint64_t seed) : rng_(seed) {}
  VProof proof(int depth);

 private:
  int coin(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::string fresh(const std::string& base);
  // Proof with context exactly one variable of type X.
  VProof leaf_x();
  VProof proof_x(int depth);
  VProof rename_var(VProof p, const std::string& from);

  std::mt19937_64 rng_;
  std::size_t counter_ = 0;
};

}  // namespace gvlam::testgen
