#include "gvlam/quantale.hpp"

#include <algorithm>
#include <limits>

#include "gvlam/error.hpp"

namespace gvlam {

std::string to_string(const Grade& g) { return g.is_infinity() ? "inf" : std::to_string(g.value()); }

namespace {

void same_semiring(const Grade& a, const Grade& b) {
  if (a.kind() != b.kind())
    throw QuantaleError("grades " + to_string(a) + " and " + to_string(b) + " come from different semirings");
}

}  // namespace

Grade g_add(const Grade& a, const Grade& b) {
  same_semiring(a, b);
  if (a.is_infinity()) return a;
  if (a.value() > std::numeric_limits<std::uint64_t>::max() - b.value())
    throw QuantaleError("grade overflow in " + to_string(a) + " + " + to_string(b));
  return Grade::nat(a.value() + b.value());
}

Grade g_mul(const Grade& a, const Grade& b) {
  same_semiring(a, b);
  if (a.is_infinity()) return a;
  if (a.value() != 0 && b.value() > std::numeric_limits<std::uint64_t>::max() / a.value())
    throw QuantaleError("grade overflow in " + to_string(a) + " * " + to_string(b));
  return Grade::nat(a.value() * b.value());
}

Grade parse_grade_literal(std::string_view text) {
  if (text == "inf") return Grade::infinity();
  if (text.empty()) throw Error("empty grade literal");
  std::uint64_t n = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw Error("unknown grade literal '" + std::string(text) + "'");
    if (n > (std::numeric_limits<std::uint64_t>::max() - 9) / 10)
      throw Error("grade literal too large '" + std::string(text) + "'");
    n = n * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return Grade::nat(n);
}

Semiring Semiring::parse(std::string_view name) {
  if (name == "nat") return Semiring(SemiringKind::nat);
  if (name == "trivial") return Semiring(SemiringKind::trivial);
  throw Error("unknown semiring '" + std::string(name) + "'");
}

std::string Semiring::name() const { return kind_ == SemiringKind::nat ? "nat" : "trivial"; }

Grade Semiring::zero() const { return kind_ == SemiringKind::nat ? Grade::nat(0) : Grade::infinity(); }
Grade Semiring::one() const { return kind_ == SemiringKind::nat ? Grade::nat(1) : Grade::infinity(); }

Grade Semiring::parse_grade(std::string_view text) const {
  Grade g = parse_grade_literal(text);
  if (!contains(g))
    throw Error("grade '" + std::string(text) + "' is not an element of the " + name() + " semiring");
  return g;
}

// ---------------------------------------------------------------------------
// Magnitude

Magnitude::Magnitude(const Rational& q) : exact_(q) {
  exact_.canonicalize();
  if (q < 0) throw QuantaleError("negative magnitude " + to_string(q));
}

Magnitude::Magnitude(const ExtRational& e) {
  if (e.is_infinite())
    infinite_ = true;
  else
    *this = Magnitude(e.value());
}

Magnitude Magnitude::infinity() {
  Magnitude m;
  m.infinite_ = true;
  return m;
}

Magnitude Magnitude::irrational(Irrational atom) {
  if (atom.lo < 0 || atom.hi < atom.lo) throw QuantaleError("bad enclosure for " + atom.form);
  Magnitude m;
  m.terms_.emplace_back(Rational(1), std::move(atom));
  return m;
}

Rational Magnitude::lower() const {
  Rational r = exact_;
  for (const auto& [c, atom] : terms_) r += c * atom.lo;
  return r;
}

Rational Magnitude::upper() const {
  Rational r = exact_;
  for (const auto& [c, atom] : terms_) r += c * atom.hi;
  return r;
}

ExtRational Magnitude::as_ext_rational() const {
  if (infinite_) return ExtRational::infinity();
  if (!terms_.empty()) throw QuantaleError("magnitude " + to_string(*this) + " is not rational");
  return ExtRational(exact_);
}

Magnitude operator+(const Magnitude& a, const Magnitude& b) {
  if (a.infinite_ || b.infinite_) return Magnitude::infinity();
  Magnitude out;
  out.exact_ = a.exact_ + b.exact_;
  out.terms_ = a.terms_;
  for (const auto& t : b.terms_) {
    auto it = std::find_if(out.terms_.begin(), out.terms_.end(),
                           [&](const auto& u) { return u.second.form == t.second.form; });
    if (it == out.terms_.end())
      out.terms_.push_back(t);
    else
      it->first += t.first;
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const auto& x, const auto& y) { return x.second.form < y.second.form; });
  return out;
}

Magnitude Magnitude::scaled(const Rational& k) const {
  if (k < 0) throw QuantaleError("negative scale factor");
  if (k == 0) return Magnitude(Rational(0));
  if (infinite_) return infinity();
  Magnitude out = *this;
  out.exact_ *= k;
  for (auto& t : out.terms_) t.first *= k;
  return out;
}

bool operator==(const Magnitude& a, const Magnitude& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  if (a.exact_ != b.exact_ || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].first != b.terms_[i].first || !(a.terms_[i].second == b.terms_[i].second)) return false;
  }
  return true;
}

std::strong_ordering compare(const Magnitude& a, const Magnitude& b) {
  if (a.is_infinite() || b.is_infinite()) {
    if (a.is_infinite() && b.is_infinite()) return std::strong_ordering::equal;
    return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  bool same_symbolic = a.terms().size() == b.terms().size();
  for (std::size_t i = 0; same_symbolic && i < a.terms().size(); ++i)
    same_symbolic = a.terms()[i].first == b.terms()[i].first && a.terms()[i].second == b.terms()[i].second;
  if (same_symbolic) {
    int c = cmp(a.exact_part(), b.exact_part());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  if (a.upper() < b.lower()) return std::strong_ordering::less;
  if (a.lower() > b.upper()) return std::strong_ordering::greater;
  throw IndeterminateComparison("cannot order " + to_string(a) + " and " + to_string(b) +
                                " from their enclosures");
}

std::string to_string(const Magnitude& m) {
  if (m.is_infinite()) return "inf";
  std::string out;
  if (m.exact_part() != 0 || m.terms().empty()) out = to_string(m.exact_part());
  for (const auto& [c, atom] : m.terms()) {
    if (!out.empty()) out += " + ";
    if (c != 1) out += to_string(c) + "*";
    out += atom.form;
  }
  return out;
}

std::string enclosure_string(const Magnitude& m, int digits) {
  if (m.is_infinite()) return "[inf, inf]";
  // lower is truncated toward zero (stays a lower bound); upper gets one ulp of slack.
  Rational ulp(1);
  for (int i = 0; i < digits; ++i) ulp /= 10;
  return "[" + to_decimal(m.lower(), digits) + ", " + to_decimal(Rational(m.upper() + ulp), digits) + "]";
}

// ---------------------------------------------------------------------------
// QuantaleValue

QuantaleValue QuantaleValue::boolean(bool b) {
  QuantaleValue v;
  v.kind_ = QuantaleKind::boolean;
  v.truth_ = b;
  return v;
}

QuantaleValue QuantaleValue::metric(Magnitude m) {
  QuantaleValue v;
  v.kind_ = QuantaleKind::metric;
  v.magnitude_ = std::move(m);
  return v;
}

QuantaleValue QuantaleValue::ultrametric(Magnitude m) {
  QuantaleValue v;
  v.kind_ = QuantaleKind::ultrametric;
  v.magnitude_ = std::move(m);
  return v;
}

bool operator==(const QuantaleValue& a, const QuantaleValue& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.kind_ == QuantaleKind::boolean) return a.truth_ == b.truth_;
  return a.magnitude_ == b.magnitude_;
}

std::string to_string(const QuantaleValue& v) {
  if (v.kind() == QuantaleKind::boolean) return v.truth() ? "1" : "0";
  return to_string(v.magnitude());
}

// ---------------------------------------------------------------------------
// Quantale

Quantale Quantale::parse(std::string_view name) {
  if (name == "boolean") return Quantale(QuantaleKind::boolean);
  if (name == "metric") return Quantale(QuantaleKind::metric);
  if (name == "ultrametric") return Quantale(QuantaleKind::ultrametric);
  throw Error("unknown quantale '" + std::string(name) + "'");
}

std::string Quantale::name() const {
  switch (kind_) {
    case QuantaleKind::boolean:
      return "boolean";
    case QuantaleKind::metric:
      return "metric";
    case QuantaleKind::ultrametric:
      return "ultrametric";
  }
  return "?";
}

void Quantale::require(const QuantaleValue& v) const {
  if (v.kind() != kind_)
    throw QuantaleError("value " + to_string(v) + " does not belong to the " + name() + " quantale");
}

QuantaleValue Quantale::unit() const {
  switch (kind_) {
    case QuantaleKind::boolean:
      return QuantaleValue::boolean(true);
    case QuantaleKind::metric:
      return QuantaleValue::metric(Magnitude(Rational(0)));
    case QuantaleKind::ultrametric:
      return QuantaleValue::ultrametric(Magnitude(Rational(0)));
  }
  return {};
}

QuantaleValue Quantale::bottom() const {
  switch (kind_) {
    case QuantaleKind::boolean:
      return QuantaleValue::boolean(false);
    case QuantaleKind::metric:
      return QuantaleValue::metric(Magnitude::infinity());
    case QuantaleKind::ultrametric:
      return QuantaleValue::ultrametric(Magnitude::infinity());
  }
  return {};
}

QuantaleValue Quantale::tensor(const QuantaleValue& a, const QuantaleValue& b) const {
  require(a);
  require(b);
  switch (kind_) {
    case QuantaleKind::boolean:
      return QuantaleValue::boolean(a.truth() && b.truth());
    case QuantaleKind::metric:
      return QuantaleValue::metric(a.magnitude() + b.magnitude());
    case QuantaleKind::ultrametric:
      return compare(a.magnitude(), b.magnitude()) < 0 ? b : a;
  }
  return {};
}

QuantaleValue Quantale::join(std::span<const QuantaleValue> values) const {
  QuantaleValue acc = bottom();
  for (const auto& v : values) {
    require(v);
    if (kind_ == QuantaleKind::boolean)
      acc = QuantaleValue::boolean(acc.truth() || v.truth());
    else if (compare(v.magnitude(), acc.magnitude()) < 0)
      acc = v;
  }
  return acc;
}

bool Quantale::leq(const QuantaleValue& a, const QuantaleValue& b) const {
  require(a);
  require(b);
  if (kind_ == QuantaleKind::boolean) return !a.truth() || b.truth();
  return compare(a.magnitude(), b.magnitude()) >= 0;
}

bool Quantale::way_below(const QuantaleValue& a, const QuantaleValue& b) const {
  require(a);
  require(b);
  // Finite lattices are continuous and every element is compact there.
  if (kind_ == QuantaleKind::boolean) return leq(a, b);
  if (a.magnitude().is_infinite() && b.magnitude().is_infinite()) return true;
  return compare(a.magnitude(), b.magnitude()) > 0;
}

bool Quantale::in_basis(const QuantaleValue& a) const {
  require(a);
  // Symbolic values are admitted: their rational upper enclosure is a basis
  // element reachable by weakening.
  return true;
}

QuantaleValue Quantale::scalar_mul(const Grade& r, const QuantaleValue& q) const {
  require(q);
  if (r.is_infinity()) {
    if (q == unit()) return q;
    return bottom();
  }
  if (r.value() == 0) return unit();
  switch (kind_) {
    case QuantaleKind::boolean:
    case QuantaleKind::ultrametric:
      return q;
    case QuantaleKind::metric:
      return QuantaleValue::metric(q.magnitude().scaled(Rational(static_cast<unsigned long>(r.value()))));
  }
  return {};
}

QuantaleValue Quantale::from_magnitude(const Magnitude& m) const {
  switch (kind_) {
    case QuantaleKind::boolean:
      if (m.is_rational() && (m.exact_part() == 0 || m.exact_part() == 1))
        return QuantaleValue::boolean(m.exact_part() == 1);
      throw QuantaleError("boolean quantale values are 0 or 1, got " + to_string(m));
    case QuantaleKind::metric:
      return QuantaleValue::metric(m);
    case QuantaleKind::ultrametric:
      return QuantaleValue::ultrametric(m);
  }
  return {};
}

QuantaleValue Quantale::parse_value(std::string_view text) const {
  if (text == "inf") return from_magnitude(Magnitude::infinity());
  auto q = try_parse_rational(text);
  if (!q || *q < 0) throw QuantaleError("invalid quantale value '" + std::string(text) + "'");
  return from_magnitude(Magnitude(*q));
}

QuantaleValue q_tensor(const QuantaleValue& a, const QuantaleValue& b) { return Quantale(a.kind()).tensor(a, b); }

QuantaleValue q_join(const Quantale& v, std::span<const QuantaleValue> values) { return v.join(values); }

bool q_way_below(const QuantaleValue& a, const QuantaleValue& b) { return Quantale(a.kind()).way_below(a, b); }

QuantaleValue scalar_mul(const Grade& r, const QuantaleValue& q) { return Quantale(q.kind()).scalar_mul(r, q); }

}  // namespace gvlam
