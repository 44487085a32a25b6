#pragma once

#include <cstdint>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "largeness/integer.hpp"

namespace largeness {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

/// Coefficient field: the rationals or Z/pZ. Elements of Z/pZ are stored as
/// Rationals with integer value in [0, p).
class Field {
 public:
  static Field rationals() { return Field(0); }
  static Field prime(std::uint64_t p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    return Field(p);
  }
  /// "Q", "F2", "F7", ...
  static Field parse(std::string_view name) {
    if (name == "Q") return rationals();
    if (name.size() >= 2 && (name[0] == 'F' || name[0] == 'f')) {
      std::uint64_t p = 0;
      for (char c : name.substr(1)) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad field name: " + std::string(name));
        p = p * 10 + static_cast<std::uint64_t>(c - '0');
        if (p > (1ull << 31)) throw std::invalid_argument("field characteristic too large");
      }
      return prime(p);
    }
    throw std::invalid_argument("bad field name: " + std::string(name));
  }

  bool is_rational() const { return p_ == 0; }
  std::uint64_t characteristic() const { return p_; }
  std::string name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

  Rational reduce(const Rational& x) const {
    if (p_ == 0) return x;
    Integer pi = p_;
    Integer num = numerator(x) % pi;
    Integer den = denominator(x) % pi;
    if (den == 0) throw std::domain_error("denominator divisible by the characteristic");
    Integer v = (num * inverse_mod(den)) % pi;
    if (v < 0) v += pi;
    return Rational(v);
  }
  Rational add(const Rational& a, const Rational& b) const { return reduce(a + b); }
  Rational sub(const Rational& a, const Rational& b) const { return reduce(a - b); }
  Rational mul(const Rational& a, const Rational& b) const { return reduce(a * b); }
  Rational div(const Rational& a, const Rational& b) const {
    if (b == 0) throw std::domain_error("division by zero");
    if (p_ == 0) return a / b;
    return reduce(a * Rational(inverse_mod(numerator(b))));
  }

  bool operator==(const Field&) const = default;

 private:
  explicit Field(std::uint64_t p) : p_(p) {}

  Integer inverse_mod(Integer a) const {
    Integer m = p_;
    a %= m;
    if (a < 0) a += m;
    Integer old_r = a, r = m, old_s = 1, s = 0;
    while (r != 0) {
      Integer q = old_r / r;
      old_r = old_r - q * r;
      std::swap(old_r, r);
      old_s = old_s - q * s;
      std::swap(old_s, s);
    }
    if (old_r != 1) throw std::domain_error("not invertible modulo p");
    Integer v = old_s % m;
    return v < 0 ? Integer(v + m) : v;
  }

  std::uint64_t p_ = 0;
};

/// Laurent polynomial in t over a Field, stored sparsely without zero terms.
class LaurentPoly {
 public:
  explicit LaurentPoly(Field f = Field::rationals()) : field_(f) {}

  static LaurentPoly monomial(Field f, long long exponent, const Rational& c) {
    LaurentPoly p(f);
    p.add_term(exponent, c);
    return p;
  }
  static LaurentPoly constant(Field f, const Rational& c) { return monomial(f, 0, c); }

  const Field& field() const { return field_; }
  const std::map<long long, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  long long min_exponent() const { return terms_.begin()->first; }
  long long max_exponent() const { return terms_.rbegin()->first; }
  /// Span max - min; -1 for the zero polynomial.
  long long degree() const { return is_zero() ? -1 : max_exponent() - min_exponent(); }
  Rational coefficient(long long e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(long long e, const Rational& c) {
    Rational v = field_.add(coefficient(e), c);
    if (v == 0)
      terms_.erase(e);
    else
      terms_[e] = v;
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  LaurentPoly operator-() const {
    LaurentPoly r(field_);
    for (const auto& [e, c] : terms_) r.add_term(e, -c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    a.check(b);
    LaurentPoly r(a.field_);
    for (const auto& [e1, c1] : a.terms_)
      for (const auto& [e2, c2] : b.terms_) r.add_term(e1 + e2, a.field_.mul(c1, c2));
    return r;
  }
  LaurentPoly scaled(const Rational& k) const {
    LaurentPoly r(field_);
    for (const auto& [e, c] : terms_) r.add_term(e, field_.mul(c, k));
    return r;
  }
  LaurentPoly shifted(long long k) const {
    LaurentPoly r(field_);
    for (const auto& [e, c] : terms_) r.terms_[e + k] = c;
    return r;
  }

  /// Canonical representative of the class under multiplication by units c t^k:
  /// lowest exponent 0; over Q primitive integer coefficients with positive
  /// lowest coefficient, over F_p lowest coefficient 1.
  LaurentPoly normalized() const {
    if (is_zero()) return *this;
    LaurentPoly r = shifted(-min_exponent());
    if (field_.is_rational()) {
      Integer lcm = 1;
      for (const auto& [e, c] : r.terms_) {
        Integer d = denominator(c);
        lcm = lcm / gcd_int(lcm, d) * d;
      }
      Integer g = 0;
      for (const auto& [e, c] : r.terms_) g = gcd_int(g, numerator(c * Rational(lcm)));
      Rational k = Rational(lcm) / Rational(g);
      if (r.terms_.begin()->second < 0) k = -k;
      return r.scaled(k);
    }
    return r.scaled(field_.div(Rational(1), r.terms_.begin()->second));
  }

  /// Equal up to a unit c t^k.
  bool associated(const LaurentPoly& o) const { return normalized() == o.normalized(); }

  bool operator==(const LaurentPoly& o) const { return field_ == o.field_ && terms_ == o.terms_; }

  std::string to_string(std::string_view var = "t") const {
    if (is_zero()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      bool neg = field_.is_rational() && c < 0;
      Rational mag = neg ? Rational(-c) : c;
      if (out.empty())
        out += neg ? "-" : "";
      else
        out += neg ? " - " : " + ";
      bool unit = mag == 1;
      if (!unit || e == 0) out += mag.str();
      if (e != 0) {
        if (!unit) out += "*";
        out += std::string(var);
        if (e != 1) out += "^" + std::to_string(e);
      }
    }
    return out;
  }

 private:
  void check(const LaurentPoly& o) const {
    if (!(field_ == o.field_)) throw std::invalid_argument("LaurentPoly: mixed coefficient fields");
  }

  Field field_;
  std::map<long long, Rational> terms_;
};

struct PolyDivision {
  LaurentPoly quotient;
  LaurentPoly remainder;
};

/// Division of ordinary polynomials (all exponents >= 0).
inline PolyDivision poly_divmod(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  const Field& f = a.field();
  LaurentPoly q(f), r = a;
  const long long db = b.max_exponent();
  const Rational lb = b.coefficient(db);
  while (!r.is_zero() && r.max_exponent() >= db) {
    long long e = r.max_exponent() - db;
    Rational c = f.div(r.coefficient(r.max_exponent()), lb);
    q.add_term(e, c);
    r -= LaurentPoly::monomial(f, e, c) * b;
  }
  return {std::move(q), std::move(r)};
}

/// a / b in the Laurent ring; throws if b does not divide a.
inline LaurentPoly exact_div(const LaurentPoly& a, const LaurentPoly& b) {
  if (b.is_zero()) throw std::domain_error("Laurent division by zero");
  if (a.is_zero()) return a;
  auto [q, r] = poly_divmod(a.shifted(-a.min_exponent()), b.shifted(-b.min_exponent()));
  if (!r.is_zero()) throw std::domain_error("Laurent division is not exact");
  return q.shifted(a.min_exponent() - b.min_exponent());
}

/// Greatest common divisor, normalized; gcd(0, 0) = 0.
inline LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.is_zero()) return b.normalized();
  if (b.is_zero()) return a.normalized();
  LaurentPoly x = a.shifted(-a.min_exponent());
  LaurentPoly y = b.shifted(-b.min_exponent());
  while (!y.is_zero()) {
    LaurentPoly r = poly_divmod(x, y).remainder;
    x = std::move(y);
    y = r.is_zero() ? r : r.shifted(-r.min_exponent());
  }
  return x.normalized();
}

}  // namespace largeness
