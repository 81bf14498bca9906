#pragma once

// Quantales V, grade semirings R, and the scalar multiplication R x V -> V.
//
// Three quantales are shipped:
//   boolean      ({0 <= 1}, or, and), unit k = 1
//   metric       ([0, inf] ordered by >=, inf, +), unit k = 0
//   ultrametric  ([0, inf] ordered by >=, inf, max), unit k = 0
// In the two metric readings the lattice order is the reverse of the numeric
// one, so joins are numeric infima and the unit 0 is the top element.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gvlam/rational.hpp"

namespace gvlam {

enum class SemiringKind { nat, trivial };

// An element of the configured semiring: a natural number, or the single
// element inf of the trivial semiring.
class Grade {
 public:
  Grade() = default;
  static Grade nat(std::uint64_t n) { return Grade(SemiringKind::nat, n); }
  static Grade infinity() { return Grade(SemiringKind::trivial, 0); }

  SemiringKind kind() const { return kind_; }
  bool is_infinity() const { return kind_ == SemiringKind::trivial; }
  std::uint64_t value() const { return value_; }

  friend bool operator==(const Grade&, const Grade&) = default;
  friend auto operator<=>(const Grade&, const Grade&) = default;

 private:
  Grade(SemiringKind k, std::uint64_t v) : kind_(k), value_(v) {}
  SemiringKind kind_ = SemiringKind::nat;
  std::uint64_t value_ = 0;
};

std::string to_string(const Grade& g);

Grade g_add(const Grade& a, const Grade& b);
Grade g_mul(const Grade& a, const Grade& b);

class Semiring {
 public:
  explicit Semiring(SemiringKind kind = SemiringKind::nat) : kind_(kind) {}
  static Semiring parse(std::string_view name);

  SemiringKind kind() const { return kind_; }
  std::string name() const;
  Grade zero() const;
  Grade one() const;
  bool contains(const Grade& g) const { return g.kind() == kind_; }
  // Parses "inf" or a decimal natural and checks membership.
  Grade parse_grade(std::string_view text) const;

 private:
  SemiringKind kind_;
};

// Parses a grade literal without a semiring: "inf" or a decimal natural.
Grade parse_grade_literal(std::string_view text);

// An irrational, non-negative real known by a symbolic form and an
// enclosing rational interval lo <= value <= hi.
struct Irrational {
  std::string form;
  Rational lo;
  Rational hi;

  friend bool operator==(const Irrational& a, const Irrational& b) { return a.form == b.form; }
};

// Extended non-negative real of the form  exact + sum_i c_i * atom_i, or inf.
// Sums of rationals with finitely many irrational atoms are closed under the
// operations the metric quantales need (addition, scaling by naturals, and
// order comparison through enclosures).
class Magnitude {
 public:
  Magnitude() = default;
  Magnitude(const Rational& q);  // NOLINT(google-explicit-constructor)
  Magnitude(const ExtRational& e);  // NOLINT(google-explicit-constructor)
  static Magnitude infinity();
  static Magnitude irrational(Irrational atom);

  bool is_infinite() const { return infinite_; }
  bool is_rational() const { return !infinite_ && terms_.empty(); }
  const Rational& exact_part() const { return exact_; }
  const std::vector<std::pair<Rational, Irrational>>& terms() const { return terms_; }

  // Valid only when finite.
  Rational lower() const;
  Rational upper() const;

  ExtRational as_ext_rational() const;  // requires is_rational() or infinite

  friend Magnitude operator+(const Magnitude& a, const Magnitude& b);
  Magnitude scaled(const Rational& k) const;

  // Structural equality: same rational part and same symbolic atoms.
  friend bool operator==(const Magnitude& a, const Magnitude& b);

 private:
  bool infinite_ = false;
  Rational exact_ = 0;
  std::vector<std::pair<Rational, Irrational>> terms_;  // sorted by form, coefficients > 0
};

// Numeric comparison; throws IndeterminateComparison when the enclosures of
// two structurally different symbolic values overlap.
std::strong_ordering compare(const Magnitude& a, const Magnitude& b);

std::string to_string(const Magnitude& m);
// "[lo, hi]" rendered with `digits` decimals.
std::string enclosure_string(const Magnitude& m, int digits = 15);

enum class QuantaleKind { boolean, metric, ultrametric };

class QuantaleValue {
 public:
  QuantaleValue() = default;
  static QuantaleValue boolean(bool b);
  static QuantaleValue metric(Magnitude m);
  static QuantaleValue ultrametric(Magnitude m);

  QuantaleKind kind() const { return kind_; }
  bool truth() const { return truth_; }
  const Magnitude& magnitude() const { return magnitude_; }

  friend bool operator==(const QuantaleValue& a, const QuantaleValue& b);

 private:
  QuantaleKind kind_ = QuantaleKind::metric;
  bool truth_ = false;
  Magnitude magnitude_;
};

std::string to_string(const QuantaleValue& v);

class Quantale {
 public:
  explicit Quantale(QuantaleKind kind = QuantaleKind::metric) : kind_(kind) {}
  static Quantale parse(std::string_view name);

  QuantaleKind kind() const { return kind_; }
  std::string name() const;

  QuantaleValue unit() const;
  QuantaleValue top() const { return unit(); }
  QuantaleValue bottom() const;

  QuantaleValue tensor(const QuantaleValue& a, const QuantaleValue& b) const;
  QuantaleValue join(std::span<const QuantaleValue> values) const;
  // Lattice order a <= b (numeric >= for the metric readings).
  bool leq(const QuantaleValue& a, const QuantaleValue& b) const;
  // a << b.
  bool way_below(const QuantaleValue& a, const QuantaleValue& b) const;
  bool in_basis(const QuantaleValue& a) const;
  QuantaleValue scalar_mul(const Grade& r, const QuantaleValue& q) const;

  // Lifts a magnitude into this quantale; for boolean only 0 and 1 are accepted.
  QuantaleValue from_magnitude(const Magnitude& m) const;
  QuantaleValue parse_value(std::string_view text) const;

 private:
  void require(const QuantaleValue& v) const;
  QuantaleKind kind_;
};

// Operand-typed conveniences; mixing quantales throws QuantaleError.
QuantaleValue q_tensor(const QuantaleValue& a, const QuantaleValue& b);
QuantaleValue q_join(const Quantale& v, std::span<const QuantaleValue> values);
bool q_way_below(const QuantaleValue& a, const QuantaleValue& b);
QuantaleValue scalar_mul(const Grade& r, const QuantaleValue& q);

}  // namespace gvlam
