#pragma once

// Direct evaluation of incomplete Kloosterman sums
//   S_q(N; a, b, c) = sum over c < n <= c + N, gcd(n, q) = 1, of e_q(a n* + b n).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kls/complex_estimate.hpp"
#include "kls/factored.hpp"

namespace kls {

class SumSpec {
 public:
  /// Reduces a and b mod q. Throws NotCoprime unless gcd(a, q) = 1 and
  /// std::invalid_argument when N = 0.
  SumSpec(FactoredInteger q, std::uint64_t N, const BigInt& a, const BigInt& b, BigInt c);

  const FactoredInteger& q() const { return q_; }
  const FactoredInteger& d() const { return d_; }
  std::uint64_t N() const { return N_; }
  const BigInt& a() const { return a_; }
  const BigInt& b() const { return b_; }
  const BigInt& c() const { return c_; }

  SumSpec with_c(BigInt c) const { return SumSpec(q_, N_, a_, b_, std::move(c)); }
  SumSpec with_N(std::uint64_t N) const { return SumSpec(q_, N, a_, b_, c_); }

 private:
  FactoredInteger q_;
  FactoredInteger d_;
  std::uint64_t N_;
  BigInt a_, b_, c_;
};

struct EvalOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  int precision_bits = kDefaultPrecisionBits;
};

struct SumResult {
  ComplexEstimate value;
  std::uint64_t terms_counted = 0;
  std::uint64_t skipped = 0;
};

/// Number of consecutive n handled by one work unit. Fixed, so the
/// reduction tree does not depend on the worker count.
inline constexpr std::uint64_t kChunkTerms = std::uint64_t{1} << 16;

SumResult eval_sum(const SumSpec& spec, const EvalOptions& options = {});

struct ShiftedSpec {
  SumSpec spec;
  BigInt shift_amount;  // c - c', in [0, d)
};

/// Moves the window start down to the nearest multiple of the kernel d.
ShiftedSpec shift_to_kernel(const SumSpec& spec);

struct ScanRow {
  std::uint64_t N = 0;
  ComplexEstimate value;
  double abs = 0.0;
  std::uint64_t terms = 0;
  std::uint64_t trivial = 0;
  double thm1_bound = 0.0;
  bool thm1_applicable = false;
  double ratio = 0.0;  // abs / terms, 0 for an empty sum
};

std::vector<ScanRow> scan(const FactoredInteger& q, const BigInt& a, const BigInt& b, const BigInt& c,
                          std::span<const std::uint64_t> N_values, const EvalOptions& options = {});

inline constexpr const char* kScanCsvHeader = "N,re,im,abs,terms,trivial,thm1_bound,thm1_applicable,ratio";

/// Header plus one line per row; floats at 17 significant digits.
std::string scan_csv(std::span<const ScanRow> rows);

/// printf("%.17g") rendering shared by every CSV/JSON emitter.
std::string format_double(double x);

}  // namespace kls
