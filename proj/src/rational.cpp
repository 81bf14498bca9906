#include "gvlam/rational.hpp"

#include <cctype>

#include "gvlam/error.hpp"

namespace gvlam {

std::string format_path(const Path& path) {
  std::string out = "/";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += "/";
    out += std::to_string(path[i]);
  }
  return out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

std::optional<Rational> try_parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::string s(text);
  bool negative = false;
  std::size_t i = 0;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    i = 1;
  }
  std::string body = s.substr(i);
  if (body.empty()) return std::nullopt;
  auto all_digits = [](std::string_view d) {
    if (d.empty()) return false;
    for (char c : d)
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
  };
  Rational result;
  if (auto slash = body.find('/'); slash != std::string::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(den, 10);
    if (d == 0) return std::nullopt;
    result = Rational(mpz_class(num, 10), d);
  } else if (auto dot = body.find('.'); dot != std::string::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) return std::nullopt;
    mpz_class den = 1;
    for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
    result = Rational(mpz_class(whole + frac, 10), den);
  } else {
    if (!all_digits(body)) return std::nullopt;
    result = Rational(mpz_class(body, 10));
  }
  result.canonicalize();
  if (negative) result = -result;
  return result;
}

Rational parse_rational(std::string_view text) {
  if (auto q = try_parse_rational(text)) return *q;
  throw Error("invalid rational literal '" + std::string(text) + "'");
}

bool is_natural(const Rational& q) { return q >= 0 && q.get_den() == 1; }

std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t()))
    return std::nullopt;
  mpz_class n = sqrt(q.get_num());
  mpz_class d = sqrt(q.get_den());
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_decimal(const Rational& q, int digits) {
  Rational a = abs(q);
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  mpz_class scaled = (a.get_num() * scale) / a.get_den();
  std::string s = scaled.get_str();
  if (static_cast<int>(s.size()) <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
  std::string out = s.substr(0, s.size() - digits);
  if (digits > 0) out += "." + s.substr(s.size() - digits);
  if (q < 0) out = "-" + out;
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return ExtRational::infinity();
  return ExtRational(Rational(a.value_ + b.value_));
}

ExtRational operator*(const ExtRational& a, const Rational& k) {
  if (k == 0) return ExtRational(0L);
  if (a.infinite_) return ExtRational::infinity();
  return ExtRational(Rational(a.value_ * k));
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string to_string(const ExtRational& e) { return e.is_infinite() ? "inf" : to_string(e.value()); }

ExtRational parse_ext_rational(std::string_view text) {
  if (text == "inf") return ExtRational::infinity();
  Rational q = parse_rational(text);
  if (q < 0) throw Error("negative distance '" + std::string(text) + "'");
  return ExtRational(q);
}

}  // namespace gvlam
