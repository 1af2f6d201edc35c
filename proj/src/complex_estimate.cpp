#include "kls/complex_estimate.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace kls {

double term_error(int precision_bits) {
  if (precision_bits < 1 || precision_bits > 64) {
    throw std::invalid_argument("precision must be in [1, 64] bits, got " + std::to_string(precision_bits));
  }
  return precision_bits <= 53 ? 0x1p-46 : 0x1p-52;
}

ComplexEstimate operator+(const ComplexEstimate& a, const ComplexEstimate& b) {
  ComplexEstimate out{a.re + b.re, a.im + b.im, 0.0};
  out.err = a.err + b.err + 2 * kUnitRoundoff * out.abs();
  return out;
}

ComplexEstimate operator*(const ComplexEstimate& a, const ComplexEstimate& b) {
  ComplexEstimate out{a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re, 0.0};
  const double ma = a.abs();
  const double mb = b.abs();
  out.err = ma * b.err + mb * a.err + a.err * b.err + 3 * kUnitRoundoff * (ma + a.err) * (mb + b.err);
  return out;
}

namespace {

// Phase x in [-1/2, 1/2] given as a signed numerator over a positive denominator.
ComplexEstimate phase_from_double(double x, int precision_bits) {
  const double err = term_error(precision_bits);
  if (precision_bits <= 53) {
    const double angle = 2 * std::numbers::pi * x;
    return {std::cos(angle), std::sin(angle), err};
  }
  const long double angle = 2 * std::numbers::pi_v<long double> * static_cast<long double>(x);
  return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)), err};
}

}  // namespace

ComplexEstimate unit_phase(std::uint64_t r, std::uint64_t q, int precision_bits) {
  r %= q;
  if (precision_bits > 53) {
    const long double num = r > q / 2 ? -static_cast<long double>(q - r) : static_cast<long double>(r);
    const long double x = num / static_cast<long double>(q);
    const long double angle = 2 * std::numbers::pi_v<long double> * x;
    return {static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)), term_error(precision_bits)};
  }
  const double num = r > q / 2 ? -static_cast<double>(q - r) : static_cast<double>(r);
  return phase_from_double(num / static_cast<double>(q), precision_bits);
}

ComplexEstimate e_q(const BigInt& v, const BigInt& q, int precision_bits) {
  if (q < 1) throw std::invalid_argument("e_q: modulus must be >= 1");
  BigInt r = mod_floor(v, q);
  if (fits_u64(q)) return unit_phase(to_u64(r), to_u64(q), precision_bits);
  if (2 * r > q) r -= q;
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, r.get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, q.get_mpz_t());
  const double x = std::ldexp(mn / md, static_cast<int>(en - ed));
  return phase_from_double(x, precision_bits);
}

ComplexEstimate e_frac(const Rational& x, int precision_bits) { return e_q(x.num(), x.den(), precision_bits); }

void SumAccumulator::merge(const SumAccumulator& other) {
  add_component(sum_re_, comp_re_, other.sum_re_);
  comp_re_ += other.comp_re_;
  add_component(sum_im_, comp_im_, other.sum_im_);
  comp_im_ += other.comp_im_;
  term_err_ += other.term_err_;
  terms_ += other.terms_;
}

ComplexEstimate SumAccumulator::result() const {
  const double t = static_cast<double>(terms_);
  const double accumulation = 2 * (4 * kUnitRoundoff + 8 * t * kUnitRoundoff * kUnitRoundoff) * t;
  return {sum_re_ + comp_re_, sum_im_ + comp_im_, term_err_ + accumulation};
}

}  // namespace kls
