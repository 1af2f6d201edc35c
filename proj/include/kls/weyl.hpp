#pragma once

// Checkable forms of the classical Weyl-sum lemmas: the geometric-sum bound
// min(P, ||alpha||^-1), the min-sum bound 6(P/Q + 1)(U + Q ln Q) under a
// rational approximation alpha = A/Q + theta/Q^2, and the damping factors
// delta_r that the argument extracts from them.

#include <cstdint>

#include "kls/bigint.hpp"
#include "kls/complex_estimate.hpp"
#include "kls/factored.hpp"

namespace kls {

/// ||x|| = min({x}, 1 - {x}), exact.
Rational dist_to_int(const Rational& x);
double dist_to_int(double x);

struct GeometricSumCheck {
  ComplexEstimate sum;  // sum_{n=1..P} e(alpha n)
  double bound = 0.0;   // min(P, 1/||alpha||), P when ||alpha|| = 0
  bool holds = false;   // |sum| <= bound + err
};

GeometricSumCheck geometric_sum_check(const Rational& alpha, std::uint64_t P,
                                      int precision_bits = kDefaultPrecisionBits);

struct RationalApproximation {
  BigInt A;
  BigInt Q;
  Rational theta_exact;  // (alpha - A/Q) Q^2
  double theta = 0.0;
};

/// Last continued-fraction convergent A/Q of alpha with Q <= Q_max. Then
/// |alpha - A/Q| <= 1/(Q Q_max) <= 1/Q^2, so |theta| <= 1 and gcd(A, Q) = 1
/// (both re-checked; std::logic_error on violation).
RationalApproximation rational_approx(const Rational& alpha, const BigInt& Q_max);
/// The double is taken as the exact dyadic rational it represents.
RationalApproximation rational_approx(double alpha, const BigInt& Q_max);

struct Lemma3Check {
  double lhs = 0.0;  // sum_{n=1..P} min(U, 1/||alpha n + beta||)
  double rhs = 0.0;  // 6 (P/Q + 1)(U + Q ln Q)
  bool holds = false;
};

/// Distances are exact; the sum of the min terms is a double.
Lemma3Check lemma3_check(const Rational& alpha, const Rational& beta, double U, std::uint64_t P,
                         const RationalApproximation& approx);

struct DampingFactor {
  std::size_t r = 0;
  BigInt Lambda;  // k h^r
  FactoredInteger Q;
  double delta = 0.0;  // 6 ln q (Q^-1/2 + Q^1/2 / (2 Lambda))^2
  double Delta = 0.0;  // min(1, delta)
};

DampingFactor damping_factor(const FactoredInteger& q, const FactoredInteger& Q_r, const BigInt& Lambda,
                             std::size_t r);

/// delta_r in log space; +inf once it leaves the double range.
double damping_delta(double ln_q, double ln_Q, double ln_Lambda);
/// The same quantity from its unsquared product form
/// 6 ln q (1/Q + 1/(2 Lambda))(1 + Q/(2 Lambda)).
double damping_delta_product_form(double ln_q, double Q, double Lambda);

/// V = sum_{|mu| < Lambda} min(2 Lambda, 1/||alpha mu||) for rational alpha.
double v_sum(const Rational& alpha, std::uint64_t Lambda, unsigned threads = 1);

}  // namespace kls
