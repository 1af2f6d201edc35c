#pragma once

// Complex values carrying a guaranteed bound on their floating-point error,
// the unit-circle exponential e_q, and compensated fixed-order accumulation.
//
// Rounding model (precision <= 53 bits, i.e. IEEE double):
//   * e_q reduces its argument exactly in integer arithmetic, forms r/q with
//     relative error <= 3u and evaluates sin/cos of 2*pi*x, x in [-1/2, 1/2].
//     The total error is below 2^-48; every term is charged 2^-46.
//   * A sum of T terms is charged T * term_error for the terms plus the
//     compensated-summation bound (4u + 8Tu^2) * T per component, u = 2^-53.
// With precision in (53, 64] the phase is evaluated in long double and
// rounded once to double, so each term is charged 2^-52.

#include <cmath>
#include <cstdint>

#include "kls/bigint.hpp"

namespace kls {

inline constexpr double kUnitRoundoff = 0x1p-53;
inline constexpr int kDefaultPrecisionBits = 53;

/// Per-term error charged for a given working precision. Throws for bits
/// outside [1, 64].
double term_error(int precision_bits);

struct ComplexEstimate {
  double re = 0.0;
  double im = 0.0;
  double err = 0.0;

  double abs() const { return std::hypot(re, im); }
  ComplexEstimate conj() const { return {re, -im, err}; }
};

ComplexEstimate operator+(const ComplexEstimate& a, const ComplexEstimate& b);
ComplexEstimate operator*(const ComplexEstimate& a, const ComplexEstimate& b);

/// e(r/q) for 0 <= r < q < 2^64.
ComplexEstimate unit_phase(std::uint64_t r, std::uint64_t q, int precision_bits = kDefaultPrecisionBits);

/// e_q(v) = exp(2 pi i v / q). v is reduced mod q exactly before any
/// floating conversion.
ComplexEstimate e_q(const BigInt& v, const BigInt& q, int precision_bits = kDefaultPrecisionBits);

/// e(x) = exp(2 pi i x) for an exact rational x.
ComplexEstimate e_frac(const Rational& x, int precision_bits = kDefaultPrecisionBits);

/// Neumaier-compensated complex accumulator. Results depend only on the
/// order of add/merge calls, never on scheduling.
class SumAccumulator {
 public:
  void add(double re, double im) {
    add_component(sum_re_, comp_re_, re);
    add_component(sum_im_, comp_im_, im);
    ++terms_;
  }
  void add(const ComplexEstimate& z) {
    add(z.re, z.im);
    term_err_ += z.err;
  }
  void charge_term_error(double err) { term_err_ += err; }

  /// Appends another accumulator's terms after this one's.
  void merge(const SumAccumulator& other);

  std::uint64_t terms() const { return terms_; }
  ComplexEstimate result() const;

 private:
  static void add_component(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::fabs(sum) >= std::fabs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  double sum_re_ = 0.0, comp_re_ = 0.0;
  double sum_im_ = 0.0, comp_im_ = 0.0;
  double term_err_ = 0.0;
  std::uint64_t terms_ = 0;
};

}  // namespace kls
