#pragma once

// The truncated geometric expansion of (1 + z q_eps)^* modulo a powerful q,
// and the reduction of the smoothed sum
//   W(n) = sum_{x,y=1..h} e_q(a (n + c + q_eps x y)^* + b q_eps x y)
// to a bivariate polynomial phase sum with explicit coefficients.

#include <cstdint>
#include <vector>

#include "kls/complex_estimate.hpp"
#include "kls/factored.hpp"
#include "kls/klsum.hpp"

namespace kls {

struct PostnikovContext {
  Rational eps;
  std::uint64_t m = 0;  // floor(2 / eps)
  FactoredInteger q;
  FactoredInteger q_eps;
  std::vector<unsigned> beta;
};

/// Builds the context and checks (m + 1)(beta_r + 1) >= alpha_r for every
/// prime, i.e. q | q_eps^(m+1). Throws DivisibilityFailure if that fails.
PostnikovContext make_context(const FactoredInteger& q, const Rational& eps);

/// sum_{j=0..m} (-z q_eps)^j mod q, which is the inverse of 1 + z q_eps.
BigInt inverse_expansion(const BigInt& z, const PostnikovContext& ctx);

struct WeylCoefficients {
  BigInt modulus;               // q
  std::vector<BigInt> a;        // a[r-1] = a_r mod q, r = 1..m
  std::vector<Rational> alpha;  // a_r / q in lowest terms
  BigInt v;                     // (n + c)^* mod q
  BigInt phase;                 // a v mod q

  std::size_t m() const { return a.size(); }
};

/// a_1 = q_eps (b - a v^2), a_r = (-1)^r a v^(r+1) q_eps^r. Throws NotCoprime
/// when gcd(n + c, q) > 1.
WeylCoefficients weyl_coefficients(const BigInt& n, const SumSpec& spec, const PostnikovContext& ctx);

struct WeylSumOptions {
  unsigned threads = 1;
  int precision_bits = kDefaultPrecisionBits;
};

/// The h x h smoothed sum, every argument reduced exactly mod q.
ComplexEstimate w_direct(const BigInt& n, const SumSpec& spec, const PostnikovContext& ctx, std::uint64_t h,
                         const WeylSumOptions& options = {});

/// sum_{x,y=1..h} e(alpha_1 xy + ... + alpha_m (xy)^m), each phase assembled
/// exactly mod 1 before conversion.
ComplexEstimate w_poly(const WeylCoefficients& coeffs, std::uint64_t h, const WeylSumOptions& options = {});

struct DenominatorQ {
  FactoredInteger exact;    // q / gcd(a_r, q)
  FactoredInteger formula;  // prod p^max(0, alpha_p - r * e_p), e_p the exponent of p in q_eps
  FactoredInteger literal;  // prod p^max(0, alpha_p - r * beta_p); report only
};

/// Reduced denominator of alpha_r, 1 <= r <= m. For r >= 2 verifies that
/// exact divides formula and q <= exact * q_eps^r (std::logic_error otherwise).
DenominatorQ denominator_Q_r(const WeylCoefficients& coeffs, const PostnikovContext& ctx, std::size_t r);

}  // namespace kls
