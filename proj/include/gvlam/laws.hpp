#pragma once

// Law checks for the symmetric-powers comonad E on finite metric spaces:
// graded comonad squares, graded comonoid laws, the interaction diagrams,
// naturality, non-expansiveness of all structure maps, the Lipschitz
// inequality, and agreement of E_n with dilation for n >= 1.

#include <cstdint>
#include <string>
#include <vector>

#include "gvlam/kernels.hpp"
#include "gvlam/metmodel.hpp"

namespace gvlam {

// Object expressions over one or two base spaces.
struct Obj {
  enum class Kind { base, unit, e, tensor };
  Kind kind = Kind::unit;
  std::size_t base = 0;  // index into the base spaces
  std::uint64_t grade = 0;
  std::vector<Obj> kids;

  static Obj base_space(std::size_t i);
  static Obj unit();
  static Obj E(std::uint64_t r, Obj a);
  static Obj tensor(Obj a, Obj b);
};

std::string to_string(const Obj& o);

// Metric on the points of an object built over `bases` (metric quantale).
class ObjSpace {
 public:
  ObjSpace(const std::vector<const FinMetSpace*>& bases, Obj obj);
  const std::vector<Value>& points() const { return points_; }
  ExtRational dist(const Value& a, const Value& b) const;
  const Obj& obj() const { return obj_; }
  FinMetSpace materialise() const;

 private:
  ExtRational dist(const Obj& o, const Value& a, const Value& b) const;
  std::vector<Value> enumerate(const Obj& o) const;
  std::vector<const FinMetSpace*> bases_;
  Obj obj_;
  std::vector<Value> points_;
};

// E_r X and Dil_r X as explicit spaces.
FinMetSpace E_space(std::uint64_t r, const FinMetSpace& x);
FinMetSpace dilation(std::uint64_t r, const FinMetSpace& x);

// Isomorphism classes of {1,2}-valued metrics on 1..max_size points, plus a
// line with rational gaps and a two-point space at infinite distance.
std::vector<FinMetSpace> standard_spaces(std::size_t max_size);

struct LawReport {
  std::vector<std::string> failures;
  std::vector<std::string> notes;
  std::size_t checks = 0;
  std::size_t lipschitz_pairs = 0;
  bool ok() const { return failures.empty(); }
};

struct LawOptions {
  std::vector<std::uint64_t> grades{0, 1, 2, 3, 4};
  kernels::Exec exec = kernels::Exec::parallel;
  std::size_t guard = 1000000;
  bool naturality = true;
  bool lipschitz = true;
};

LawReport check_comonad_laws(const std::vector<FinMetSpace>& spaces, const LawOptions& opt = {});

}  // namespace gvlam
