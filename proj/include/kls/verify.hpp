#pragma once

// Seeded randomized suites that exercise each module's invariants; the
// `verify` subcommand runs one by name.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kls/complex_estimate.hpp"
#include "kls/errors.hpp"
#include "kls/factored.hpp"
#include "kls/rng.hpp"

namespace kls {

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::uint64_t cases = 0;  // 0: the suite's default
  unsigned threads = 1;
  int precision_bits = kDefaultPrecisionBits;
  std::uint64_t budget = kDefaultBudget;
};

struct WIdentityRow {
  std::string q;
  std::string eps;
  std::string n;
  std::uint64_t h = 0;
  ComplexEstimate lhs;  // w_direct
  ComplexEstimate rhs;  // e_q(a v) w_poly
  double abs_diff = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string margin_name;
  double worst_margin = 0.0;
  std::vector<std::pair<std::string, double>> extras;
  std::vector<WIdentityRow> w_rows;

  bool passed() const { return failures == 0; }
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for an unknown suite name.
SuiteReport run_suite(std::string_view name, const SuiteConfig& config);

/// Random powerful modulus: one to three primes from {2,...,13}, every
/// exponent >= 2, value <= limit.
FactoredInteger random_powerful_modulus(Rng& rng, const BigInt& limit);

/// Uniform residue in [1, q) coprime to q.
BigInt random_unit(Rng& rng, const FactoredInteger& q);

}  // namespace kls
