#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace gvlam {

using Rational = mpq_class;

std::string to_string(const Rational& q);

// Accepts "3", "-2", "7/4" and decimals such as "0.25" or "-1.5".
Rational parse_rational(std::string_view text);

std::optional<Rational> try_parse_rational(std::string_view text);

bool is_natural(const Rational& q);

// Exact square root when q is the square of a rational.
std::optional<Rational> exact_sqrt(const Rational& q);

// Fixed-point decimal rendering, truncated toward zero.
std::string to_decimal(const Rational& q, int digits);

double to_double(const Rational& q);

// Non-negative extended rational: a finite rational or +inf.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(const Rational& q) : value_(q) { value_.canonicalize(); }  // NOLINT(google-explicit-constructor)
  ExtRational(long n) : value_(n) {}             // NOLINT(google-explicit-constructor)

  static ExtRational infinity() {
    ExtRational e;
    e.infinite_ = true;
    return e;
  }

  bool is_infinite() const { return infinite_; }
  const Rational& value() const { return value_; }

  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator*(const ExtRational& a, const Rational& k);
  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);

  ExtRational& operator+=(const ExtRational& other) { return *this = *this + other; }

 private:
  bool infinite_ = false;
  Rational value_ = 0;
};

std::string to_string(const ExtRational& e);
ExtRational parse_ext_rational(std::string_view text);

inline const ExtRational& min(const ExtRational& a, const ExtRational& b) { return b < a ? b : a; }
inline const ExtRational& max(const ExtRational& a, const ExtRational& b) { return a < b ? b : a; }

}  // namespace gvlam
