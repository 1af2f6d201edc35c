#include "kls/bigint.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kls {

BigInt parse_bigint(std::string_view text) {
  std::string s(text);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  BigInt out;
  if (s.empty() || out.set_str(s, 10) != 0) {
    throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
  }
  return out;
}

bool fits_u64(const BigInt& x) {
  return sgn(x) >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

std::uint64_t to_u64(const BigInt& x) {
  if (!fits_u64(x)) throw std::out_of_range("value does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, x.get_mpz_t());
  return out;
}

BigInt from_u64(std::uint64_t x) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(x), 0, 0, &x);
  return out;
}

BigInt from_i64(std::int64_t x) {
  if (x >= 0) return from_u64(static_cast<std::uint64_t>(x));
  // avoid overflow on INT64_MIN
  BigInt out = from_u64(static_cast<std::uint64_t>(-(x + 1)));
  return -out - 1;
}

BigInt mod_floor(const BigInt& x, const BigInt& m) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

double log_big(const BigInt& x) {
  if (sgn(x) <= 0) throw std::domain_error("log of non-positive integer");
  long exp2 = 0;
  const double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
}

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(const mpq_class& value) : value_(value) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  const std::string s(text);
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return Rational(parse_bigint(s.substr(0, slash)), parse_bigint(s.substr(slash + 1)));
  }
  if (const auto dot = s.find('.'); dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const auto decimals = s.size() - dot - 1;
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, decimals);
    if (digits.empty() || digits == "-" || digits == "+") throw std::invalid_argument("not a number: '" + s + "'");
    return Rational(parse_bigint(digits), den);
  }
  return Rational(parse_bigint(s), BigInt(1));
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw std::domain_error("non-finite double");
  int exp2 = 0;
  double mant = std::frexp(x, &exp2);  // x = mant * 2^exp2, |mant| in [0.5, 1)
  // Scale the mantissa to an exact 53-bit integer.
  const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp2 -= 53;
  BigInt num = from_i64(scaled);
  BigInt den = 1;
  if (exp2 >= 0) {
    num <<= exp2;
  } else {
    den <<= -exp2;
  }
  return Rational(num, den);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (sgn(b.value_) == 0) throw std::domain_error("division by zero rational");
  return Rational(mpq_class(a.value_ / b.value_));
}

BigInt Rational::floor() const {
  BigInt out;
  mpz_fdiv_q(out.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return out;
}

Rational Rational::frac() const { return *this - Rational(floor(), BigInt(1)); }

double Rational::to_double() const {
  // mpq_get_d truncates; fine for reporting.
  return value_.get_d();
}

std::string Rational::to_string() const { return value_.get_str(); }

}  // namespace kls
