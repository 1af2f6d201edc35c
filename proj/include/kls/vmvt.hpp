#pragma once

// Exact counts J_{k,m}(P; lambda) of solutions to the Vinogradov system
//   x_1^j + ... + x_k^j = x_{k+1}^j + ... + x_{2k}^j + lambda_j,  j = 1..m,
// with 1 <= x_i <= P, and the mean value bound D(m,tau) P^(2k - Delta(m,tau)).

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "kls/bigint.hpp"
#include "kls/errors.hpp"

namespace kls {

struct VinogradovInstance {
  unsigned k = 1;
  unsigned m = 1;
  std::uint64_t P = 1;
  std::vector<std::int64_t> lambda;  // size m
};

struct JCountOptions {
  std::uint64_t budget = kDefaultBudget;  // max multisets enumerated
  unsigned threads = 1;
};

using PowerSumKey = std::vector<std::int64_t>;

struct PowerSumKeyHash {
  std::size_t operator()(const PowerSumKey& key) const noexcept;
};

/// Map from (sum x, sum x^2, ..., sum x^m) over ordered k-tuples in [1,P]^k
/// to the number of tuples attaining it. Built from multisets
/// x_1 <= ... <= x_k weighted by k! / prod(multiplicity!).
class PowerSumHistogram {
 public:
  static PowerSumHistogram build(unsigned k, unsigned m, std::uint64_t P, const JCountOptions& options = {});

  /// Grows the range to [1, new_P], enumerating only the multisets whose
  /// largest element exceeds the current P.
  void extend(std::uint64_t new_P, const JCountOptions& options = {});

  unsigned k() const { return k_; }
  unsigned m() const { return m_; }
  std::uint64_t P() const { return P_; }
  std::size_t size() const { return counts_.size(); }
  unsigned __int128 count(const PowerSumKey& key) const;
  /// Sum of all counts; equals P^k.
  BigInt total() const;
  /// Running sum of the multiset weights added so far, without a pass over
  /// the keys. Matches total().
  BigInt tuples_enumerated() const;
  /// Keys in ascending lexicographic order.
  std::vector<PowerSumKey> sorted_keys() const;

  /// sum_s H(s) H(s - lambda)
  BigInt correlate(const std::vector<std::int64_t>& lambda) const;

 private:
  unsigned k_ = 0, m_ = 0;
  std::uint64_t P_ = 0;
  std::unordered_map<PowerSumKey, unsigned __int128, PowerSumKeyHash> counts_;
  unsigned __int128 tuples_ = 0;

  struct Slice;
  void absorb(std::vector<Slice>& slices);
};

/// C(P + k - 1, k), the number of multisets the histogram enumerates.
BigInt multiset_count(std::uint64_t P, unsigned k);

/// Throws BudgetExceeded when the enumeration would exceed options.budget.
BigInt j_count(const VinogradovInstance& inst, const JCountOptions& options = {});
BigInt j_count_zero(unsigned k, unsigned m, std::uint64_t P, const JCountOptions& options = {});

/// Every attainable lambda with its count, by pairing histogram keys. Throws
/// BudgetExceeded when the number of key pairs exceeds max_pairs.
std::map<PowerSumKey, BigInt> lambda_distribution(unsigned k, unsigned m, std::uint64_t P, std::uint64_t max_pairs,
                                                  const JCountOptions& options = {});

struct Lemma4Bound {
  double log_D = 0.0;  // 6 m tau ln(m tau) + 4 m (m+1) tau ln(2m)
  double Delta = 0.0;  // m (m+1)/2 (1 - (1 - 1/m)^tau)
  double log_bound = 0.0;
};

Lemma4Bound lemma4_bound(unsigned m, unsigned tau, std::uint64_t P);

struct Lemma4Check {
  BigInt count;
  double log_bound = 0.0;
  bool holds = false;
};

/// Counts J_{m tau, m}(P) and compares ln(count) with the bound.
Lemma4Check lemma4_check(unsigned m, unsigned tau, std::uint64_t P, const JCountOptions& options = {});

}  // namespace kls
