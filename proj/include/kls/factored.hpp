#pragma once

// Integers carried together with their prime factorization, plus the exact
// modular helpers built on them (kernel, smoothing modulus, inverses).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kls/bigint.hpp"

namespace kls {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an inverse is requested for a residue sharing a factor with the modulus.
class NotCoprime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime_u64(std::uint64_t n);

/// Largest value the built-in trial-division factorizer accepts (2^48).
inline constexpr std::uint64_t kTrialDivisionLimit = std::uint64_t{1} << 48;

/// A positive integer with its full factorization. Primes are strictly
/// increasing, each is verified prime, and exponents are >= 1. The empty
/// factorization denotes 1.
class FactoredInteger {
 public:
  FactoredInteger() : value_(1) {}
  explicit FactoredInteger(std::vector<PrimePower> factors);

  /// Parses "p1^a1*p2^a2*..." (bare primes allowed, repeated primes merged)
  /// or a plain integer below 2^48, which is factored by trial division.
  static FactoredInteger parse(std::string_view text);
  static FactoredInteger factor(std::uint64_t n);

  const BigInt& value() const { return value_; }
  std::span<const PrimePower> factors() const { return factors_; }
  std::size_t num_primes() const { return factors_.size(); }
  unsigned exponent_of(std::uint64_t prime) const;

  /// Canonical text form, ascending primes, exponent 1 omitted.
  std::string to_string() const;
  double log() const;
  bool divides(const FactoredInteger& other) const;

  friend FactoredInteger operator*(const FactoredInteger& a, const FactoredInteger& b);
  friend bool operator==(const FactoredInteger& a, const FactoredInteger& b) { return a.factors_ == b.factors_; }

 private:
  std::vector<PrimePower> factors_;
  BigInt value_;
};

/// Squarefree kernel d = prod p over p | q.
FactoredInteger kernel(const FactoredInteger& q);

struct SmoothingModulus {
  FactoredInteger value;        // d * prod p^beta
  std::vector<unsigned> beta;   // floor(eps * alpha_r), one per prime of q
};

/// q_eps = d * prod p_r^{floor(eps * alpha_r)}; requires 0 < eps < 1.
SmoothingModulus q_epsilon(const FactoredInteger& q, const Rational& eps);

/// n* in [1, q-1] with n * n* = 1 (mod q). Throws NotCoprime.
BigInt mod_inverse(const BigInt& n, const BigInt& q);
std::uint64_t mod_inverse_u64(std::uint64_t n, std::uint64_t q);

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

}  // namespace kls
