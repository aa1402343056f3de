#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace parpush {

using Integer = mpz_class;

/// Exact rational number in canonical form: positive denominator, coprime
/// numerator and denominator. Backed by GMP's mpq_t.
class Rational {
 public:
  Rational() = default;
  Rational(long value) : value_(value) {}                      // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(static_cast<long>(value)) {}    // NOLINT(google-explicit-constructor)
  Rational(long long value);                                   // NOLINT(google-explicit-constructor)
  Rational(const Integer& value) : value_(value) {}            // NOLINT(google-explicit-constructor)

  /// p/q reduced to canonical form. Throws DivisionByZero when q == 0.
  static Rational normalize(const Integer& p, const Integer& q);

  /// Accepts "p/q" and "n" (optional leading '-'); whitespace is not allowed.
  static Rational parse(std::string_view text);

  Integer numerator() const { return value_.get_num(); }
  Integer denominator() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  /// Largest integer <= *this.
  Integer floor() const;
  /// *this - floor(*this), always in [0, 1).
  Rational frac_part() const;
  Rational abs() const;

  /// Always "p/q", integers included ("3/1").
  std::string to_string() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) {
    Rational r;
    r.value_ = -a.value_;
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  mpq_class value_;
};

inline Rational frac_part(const Rational& x) { return x.frac_part(); }
inline Rational normalize(const Integer& p, const Integer& q) { return Rational::normalize(p, q); }

}  // namespace parpush
