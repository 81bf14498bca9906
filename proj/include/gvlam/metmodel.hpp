#pragma once

// Finite metric models. Ground types are finite metric spaces; a term in
// context is evaluated pointwise on the enumerated points of its context,
// with the graded modality read as the symmetric-powers comonad E_r:
// E_0 is the one-point space, E_r (r >= 1) rescales distances by r and the
// comonad structure is the identity (or diagonal) on carriers.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "gvlam/theory.hpp"
#include "gvlam/typechecker.hpp"

namespace gvlam {

struct FinMetSpace {
  std::string name;
  std::vector<std::string> labels;
  std::vector<ExtRational> d;  // row-major, size()^2 entries

  std::size_t size() const { return labels.size(); }
  const ExtRational& dist(std::size_t i, std::size_t j) const { return d[i * size() + j]; }

  static FinMetSpace from_matrix(std::string name, std::vector<std::vector<ExtRational>> rows,
                                 std::vector<std::string> labels = {});
  // Empty when dist(x,x) = 0, the triangle inequality holds, points are
  // separated, and (if requested) dist is symmetric.
  std::vector<std::string> violations(bool symmetric = true) const;
};

// {0..n} with |i - j|.
FinMetSpace timed_space(std::size_t n);
FinMetSpace point_space();

// Points of interpreted types: ground points, the unit point, pairs, and
// function tables indexed by the enumerated points of the domain.
class Value {
 public:
  enum class Kind { atom, unit, pair, fun };
  Value() = default;
  static Value atom(std::size_t i);
  static Value unit();
  static Value pair(Value a, Value b);
  using Index = std::map<Value, std::size_t>;
  // `domain` maps each point of the domain to its table position.
  static Value fun(std::vector<Value> table, std::shared_ptr<const Index> domain);

  Kind kind() const { return kind_; }
  std::size_t index() const { return index_; }
  const Value& first() const { return (*kids_)[0]; }
  const Value& second() const { return (*kids_)[1]; }
  const std::vector<Value>& table() const { return *kids_; }
  const Value& apply(const Value& x) const;

  friend std::strong_ordering operator<=>(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) { return (a <=> b) == 0; }

 private:
  Kind kind_ = Kind::unit;
  std::size_t index_ = 0;
  std::shared_ptr<const std::vector<Value>> kids_;
  std::shared_ptr<const Index> domain_;
};

std::string to_string(const Value& v);

// A denotation ctx -> cod: one value per enumerated point of the context.
struct MetMap {
  Context ctx;
  Type cod;
  std::vector<std::vector<Value>> dom;
  std::vector<Value> table;
};

using SymbolFn = std::function<Value(const OpSig&, const std::vector<Value>&)>;

class MetModel {
 public:
  MetModel(const Theory& th);

  // Every ground type becomes timed_space(n); wait_k is saturating addition
  // and max/min (if declared) are pointwise.
  static MetModel timed(const Theory& th, std::size_t n = 32);
  // Model file: `space NAME` blocks with distance rows, `map SYMBOL` blocks with
  // "args -> result" point indices, `timed NAME N`, each block closed by `end`.
  static MetModel parse(const Theory& th, std::string_view text);
  // "timed(N)" or a model file path.
  static MetModel from_spec(const Theory& th, const std::string& spec);

  void set_ground(const std::string& name, FinMetSpace space);
  // Handles a plain symbol or every instance of a family.
  void set_symbol(const std::string& name, SymbolFn fn);

  const Theory& theory() const { return *th_; }
  const FinMetSpace& ground(const std::string& name) const;
  std::size_t guard() const { return guard_; }
  void set_guard(std::size_t g) { guard_ = g; }

  ExtRational dist(const Type& a, const Value& x, const Value& y) const;
  // Enumerated points; function spaces list every non-expansive table.
  const std::vector<Value>& points(const Type& a) const;
  std::size_t index_of(const Type& a, const Value& x) const;
  std::shared_ptr<const Value::Index> index_map(const Type& a) const;
  FinMetSpace interp_type(const Type& a) const;

  Value eval(const Term& t, const std::map<std::string, Value>& env) const;
  Value apply_op(const std::string& symbol, const std::vector<Value>& args) const;
  // Denotation of ctx |- v; asserts the result is non-expansive.
  MetMap interp(const Derivation& d) const;
  MetMap interp(const Context& ctx, const Term& v) const;
  std::vector<std::vector<Value>> context_points(const Context& ctx) const;
  ExtRational context_dist(const Context& ctx, const std::vector<Value>& a, const std::vector<Value>& b) const;

 private:
  ExtRational scale(const Grade& r, const ExtRational& d) const;
  ExtRational combine(const ExtRational& a, const ExtRational& b) const;
  void check_symbol(const OpSig& sig) const;

  std::shared_ptr<const Theory> th_;
  std::map<std::string, FinMetSpace> grounds_;
  std::map<std::string, SymbolFn> symbols_;
  std::size_t guard_;
  struct Cache {
    std::mutex mu;
    std::map<std::string, std::shared_ptr<const std::vector<Value>>> points;
    std::map<std::string, std::shared_ptr<const Value::Index>> index;
    std::set<std::string> checked;
  };
  std::shared_ptr<Cache> cache_;
};

// sup over the context points of the codomain distance.
ExtRational hom_distance(const MetModel& m, const MetMap& f, const MetMap& g);

struct AxiomCheck {
  ExtRational distance;
  bool ok = false;
};

// Distance between the interpreted sides versus the instance bound.
AxiomCheck check_axiom(const MetModel& m, const AxiomInstance& inst);
// distance <= q, numerically (metric readings).
bool within_bound(const ExtRational& distance, const QuantaleValue& q);

// Enumeration guard: GVLAM_GUARD if set, otherwise 10^6.
std::size_t default_guard();

}  // namespace gvlam
