#pragma once

// Arbitrary-precision integers and exact rationals (GMP-backed).

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace kls {

using BigInt = mpz_class;

BigInt parse_bigint(std::string_view text);

bool fits_u64(const BigInt& x);
std::uint64_t to_u64(const BigInt& x);
BigInt from_u64(std::uint64_t x);
BigInt from_i64(std::int64_t x);

/// Non-negative residue of x modulo m (m > 0).
BigInt mod_floor(const BigInt& x, const BigInt& m);

/// Natural logarithm of a positive big integer, accurate to double precision
/// for values far beyond the double range.
double log_big(const BigInt& x);

/// Exact rational in lowest terms with positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long num, long den = 1);  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const mpq_class& value);

  /// Accepts "p/q", "p" and finite decimals such as "0.05".
  static Rational parse(std::string_view text);
  /// The exact dyadic rational equal to a finite double.
  static Rational from_double(double x);

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }
  const mpq_class& get() const { return value_; }

  BigInt floor() const;
  /// x - floor(x), in [0, 1).
  Rational frac() const;
  double to_double() const;
  std::string to_string() const;
  bool is_integer() const { return value_.get_den() == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(mpq_class(-value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.value_ < b.value_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.value_ <= b.value_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.value_ > b.value_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.value_ >= b.value_; }

 private:
  mpq_class value_{0};
};

}  // namespace kls
