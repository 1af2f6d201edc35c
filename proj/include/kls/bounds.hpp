#pragma once

// Statement-level bounds for short Kloosterman sums to powerful moduli,
// the parameter choices behind them, and the exact amplification inequality
// that starts the argument.
//
// Every logarithm is natural.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kls/bigint.hpp"
#include "kls/errors.hpp"
#include "kls/factored.hpp"
#include "kls/klsum.hpp"

namespace kls {

/// ln q and ln d for moduli too large to materialize ("symbolic q").
struct ModulusLogs {
  double ln_q = 0.0;
  double ln_d = 0.0;
  static ModulusLogs of(const FactoredInteger& q);
};

inline constexpr double kTheorem1Gamma1 = 900.0;
/// 160^-4
inline constexpr double kTheorem1Gamma = 1.0 / (160.0 * 160.0 * 160.0 * 160.0);

// Condition names reported in BoundReport::failed_conditions.
inline constexpr const char* kCondKernelPower = "kernel_power";        // d^15 <= N or d^(2+delta) <= N
inline constexpr const char* kCondLowerThreshold = "lower_threshold";  // e^(gamma1 (ln q)^(2/3)) <= N
inline constexpr const char* kCondUpperSqrt = "upper_sqrt";            // N <= sqrt(q)
inline constexpr const char* kCondUpperPower = "upper_power";          // N <= q^(delta/20)

struct BoundReport {
  double bound_value = 0.0;  // N exp(-gamma (ln N)^3 / (ln q)^2); +inf past the double range
  double log_bound = 0.0;
  bool applicable = false;
  std::vector<std::string> failed_conditions;
  double gamma = 0.0;
  double gamma1 = 0.0;
};

BoundReport theorem1_bound(const FactoredInteger& q, const BigInt& N);
BoundReport theorem1_bound(const ModulusLogs& q, const BigInt& N);

struct Theorem2Constants {
  double gamma;
  double gamma1;
};
/// Throws DeltaOutOfRange unless 0 < delta < 0.1.
Theorem2Constants theorem2_constants(const Rational& delta);

BoundReport theorem2_bound(const FactoredInteger& q, const BigInt& N, const Rational& delta);
BoundReport theorem2_bound(const ModulusLogs& q, const BigInt& N, const Rational& delta);

struct ProofParameters {
  Rational log_ratio;  // ln N / ln q
  bool log_ratio_exact = false;
  Rational c, c1, c2;
  Rational eps;  // c * ln N / ln q
  std::uint64_t m = 0;
  std::uint64_t r1 = 0, r2 = 0;
  std::uint64_t kappa = 0;
  std::uint64_t tau = 0;
  std::uint64_t k = 0;
  BigInt h;  // floor(N^(1/4)) + 1
  bool r1_positive = false;  // r1 >= 1
  bool gap_positive = false;  // r2 - r1 >= 1
};

/// ln N / ln q as an exact rational when N and q are powers of a common
/// integer (checked by removing the primes of q from N); otherwise the exact value of the
/// double quotient with `exact` cleared.
Rational log_ratio(const FactoredInteger& q, const BigInt& N, bool* exact = nullptr);

/// Parameter choices for the first theorem (delta empty) or the second.
ProofParameters proof_parameters(const FactoredInteger& q, const BigInt& N,
                                 const std::optional<Rational>& delta = std::nullopt);
ProofParameters proof_parameters_from_ratio(const Rational& log_ratio, const BigInt& N,
                                            const std::optional<Rational>& delta = std::nullopt);

/// C(k,m)^(1/(4k^2)) with C(k,m) = k^{12k} (2m)^{4k(m+1)} (2k)^{2m}, via logs.
double holder_constant(std::uint64_t k, std::uint64_t m);
double log_holder_constant(std::uint64_t k, std::uint64_t m);

struct AmplifiedBound {
  double lhs = 0.0;  // |S_1|
  double rhs = 0.0;  // h^-2 sum |W(n)| + h^2 q_eps
  double sum_abs_w = 0.0;
  BigInt q_eps;
  std::uint64_t h = 0;
  std::uint64_t w_evaluations = 0;
  bool holds = false;  // lhs <= rhs (1 + 1e-6)
};

struct AmplifyOptions {
  unsigned threads = 0;
  int precision_bits = kDefaultPrecisionBits;
  std::uint64_t budget = kDefaultBudget;  // limit on N * h^2 term evaluations
};

inline constexpr double kAmplifiedTolerance = 1e-6;

/// Requires c = 0 (mod d); throws std::invalid_argument otherwise and
/// BudgetExceeded when N h^2 exceeds the budget.
AmplifiedBound amplified_bound(const SumSpec& spec, const Rational& eps, std::uint64_t h,
                               const AmplifyOptions& options = {});

struct RegimeReport {
  double ln_q = 0.0;
  double ln_d = 0.0;
  double ln_upper = 0.0;             // ln sqrt(q), or (delta/20) ln q
  double ln_kernel_threshold = 0.0;  // 15 ln d, or (2 + delta) ln d
  double ln_exp_threshold = 0.0;     // gamma1 (ln q)^(2/3)
  bool window_nonempty = false;
  std::string binding_constraint;    // the larger lower threshold
  std::optional<Rational> delta;
};

RegimeReport regime_report(const FactoredInteger& q, const std::optional<Rational>& delta = std::nullopt);
RegimeReport regime_report(const ModulusLogs& q, const std::optional<Rational>& delta = std::nullopt);

/// The ln q at which gamma1 (ln q)^(2/3) = (ln q)/2, found by bisection.
double theorem1_crossover_ln_q();

/// True when the first theorem's window is empty for every q with
/// ln q <= ln_q_max, whatever the kernel.
bool theorem1_window_empty_below(double ln_q_max);

}  // namespace kls
