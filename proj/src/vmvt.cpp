#include "kls/vmvt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kls/parallel.hpp"

namespace kls {

namespace {

using u128 = unsigned __int128;
using Histogram = std::unordered_map<PowerSumKey, u128, PowerSumKeyHash>;

BigInt from_u128(u128 x) {
  BigInt hi = from_u64(static_cast<std::uint64_t>(x >> 64));
  return (hi << 64) + from_u64(static_cast<std::uint64_t>(x));
}

void validate_shape(unsigned k, unsigned m, std::uint64_t P) {
  if (k == 0 || m == 0 || P == 0) throw std::invalid_argument("k, m and P must all be >= 1");
}

// Rejects inputs whose counts or keys would leave the fixed-width ranges, and
// enumerations larger than the budget.
void check_limits(unsigned k, unsigned m, std::uint64_t P, std::uint64_t budget) {
  const double log2P = std::log2(static_cast<double>(P));
  if (k > 34 || k * log2P >= 126.0) {
    throw BudgetExceeded("P^k = " + std::to_string(P) + "^" + std::to_string(k) + " exceeds 126-bit counters",
                         std::pow(static_cast<double>(P), k), static_cast<double>(budget));
  }
  if (std::log2(static_cast<double>(k)) + m * log2P >= 62.0) {
    throw BudgetExceeded("power sums k P^m overflow 62-bit keys", std::pow(static_cast<double>(P), m) * k,
                         static_cast<double>(budget));
  }
  const BigInt cost = multiset_count(P, k);
  if (cost > from_u64(budget)) {
    throw BudgetExceeded("J_{" + std::to_string(k) + "," + std::to_string(m) + "}(" + std::to_string(P) +
                             ") needs " + cost.get_str() + " multisets, budget " + std::to_string(budget),
                         cost.get_d(), static_cast<double>(budget));
  }
}

class MultisetEnumerator {
 public:
  MultisetEnumerator(unsigned k, unsigned m, std::uint64_t P, Histogram& out)
      : k_(k), m_(m), P_(P), out_(out), chosen_(k), sums_(m, 0) {
    factorial_.assign(k + 1, 1);
    for (unsigned i = 1; i <= k; ++i) factorial_[i] = factorial_[i - 1] * i;
  }

  /// Every multiset whose smallest element is `first`.
  void run_slice(std::uint64_t first) {
    push(0, first);
    descend(1, first);
    pop(first);
  }

  /// Every multiset whose largest element is `last`.
  void run_with_max(std::uint64_t last) {
    push(k_ - 1, last);
    descend_capped(0, 1, last);
    pop(last);
  }

  u128 added() const { return added_; }

 private:
  void push(unsigned depth, std::uint64_t v) {
    chosen_[depth] = v;
    const auto x = static_cast<std::int64_t>(v);
    std::int64_t p = 1;
    for (unsigned j = 0; j < m_; ++j) sums_[j] += (p *= x);
  }
  void pop(std::uint64_t v) {
    const auto x = static_cast<std::int64_t>(v);
    std::int64_t p = 1;
    for (unsigned j = 0; j < m_; ++j) sums_[j] -= (p *= x);
  }

  void descend(unsigned depth, std::uint64_t lo) {
    if (depth == k_) {
      record();
      return;
    }
    for (std::uint64_t v = lo; v <= P_; ++v) {
      push(depth, v);
      descend(depth + 1, v);
      pop(v);
    }
  }

  void descend_capped(unsigned depth, std::uint64_t lo, std::uint64_t last) {
    if (depth == k_ - 1) {
      record();
      return;
    }
    for (std::uint64_t v = lo; v <= last; ++v) {
      push(depth, v);
      descend_capped(depth + 1, v, last);
      pop(v);
    }
  }

  void record() {
    const u128 w = weight();
    out_[sums_] += w;
    added_ += w;
  }

  // Number of orderings of the current multiset: k! / prod(run length!).
  u128 weight() const {
    u128 w = factorial_[k_];
    unsigned run = 1;
    for (unsigned i = 1; i <= k_; ++i) {
      if (i < k_ && chosen_[i] == chosen_[i - 1]) {
        ++run;
      } else {
        w /= factorial_[run];
        run = 1;
      }
    }
    return w;
  }

  unsigned k_, m_;
  std::uint64_t P_;
  Histogram& out_;
  std::vector<std::uint64_t> chosen_;
  PowerSumKey sums_;
  std::vector<u128> factorial_;
  u128 added_ = 0;
};


bool products_fit_u128(unsigned k, std::uint64_t P) {
  return 2.0 * k * std::log2(static_cast<double>(P)) < 126.0;
}

}  // namespace

struct PowerSumHistogram::Slice {
  Histogram counts;
  u128 added = 0;
};

std::size_t PowerSumKeyHash::operator()(const PowerSumKey& key) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (const auto v : key) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

BigInt multiset_count(std::uint64_t P, unsigned k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), P + k - 1, k);
  return out;
}

PowerSumHistogram PowerSumHistogram::build(unsigned k, unsigned m, std::uint64_t P, const JCountOptions& options) {
  validate_shape(k, m, P);
  check_limits(k, m, P, options.budget);
  PowerSumHistogram out;
  out.k_ = k;
  out.m_ = m;
  out.P_ = P;
  auto slices = map_chunks<Slice>(P, options.threads, [&](std::size_t i) {
    Slice local;
    MultisetEnumerator e(k, m, P, local.counts);
    e.run_slice(i + 1);
    local.added = e.added();
    return local;
  });
  out.absorb(slices);
  return out;
}

void PowerSumHistogram::extend(std::uint64_t new_P, const JCountOptions& options) {
  if (new_P < P_) throw std::invalid_argument("extend cannot shrink P");
  if (new_P == P_) return;
  check_limits(k_, m_, new_P, options.budget);
  const std::uint64_t old_P = P_;
  auto slices = map_chunks<Slice>(new_P - old_P, options.threads, [&](std::size_t i) {
    Slice local;
    MultisetEnumerator e(k_, m_, new_P, local.counts);
    e.run_with_max(old_P + 1 + i);
    local.added = e.added();
    return local;
  });
  absorb(slices);
  P_ = new_P;
}

void PowerSumHistogram::absorb(std::vector<Slice>& slices) {
  for (auto& slice : slices) {
    tuples_ += slice.added;
    if (counts_.empty()) {
      counts_ = std::move(slice.counts);
      continue;
    }
    for (auto& [key, hits] : slice.counts) counts_[key] += hits;
  }
}

unsigned __int128 PowerSumHistogram::count(const PowerSumKey& key) const {
  const auto it = counts_.find(key);
  return it == counts_.end() ? 0 : it->second;
}

BigInt PowerSumHistogram::tuples_enumerated() const { return from_u128(tuples_); }

BigInt PowerSumHistogram::total() const {
  BigInt out = 0;
  for (const auto& [key, hits] : counts_) out += from_u128(hits);
  return out;
}

std::vector<PowerSumKey> PowerSumHistogram::sorted_keys() const {
  std::vector<PowerSumKey> keys;
  keys.reserve(counts_.size());
  for (const auto& [key, hits] : counts_) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

BigInt PowerSumHistogram::correlate(const std::vector<std::int64_t>& lambda) const {
  if (lambda.size() != m_) {
    throw std::invalid_argument("lambda has " + std::to_string(lambda.size()) + " entries, expected m = " +
                                std::to_string(m_));
  }
  const bool narrow = products_fit_u128(k_, P_);
  u128 small = 0;
  BigInt wide = 0;
  PowerSumKey shifted(m_);
  for (const auto& [key, hits] : counts_) {
    for (unsigned j = 0; j < m_; ++j) shifted[j] = key[j] - lambda[j];
    const u128 other = count(shifted);
    if (other == 0) continue;
    if (narrow) {
      small += hits * other;
    } else {
      wide += from_u128(hits) * from_u128(other);
    }
  }
  return narrow ? from_u128(small) : wide;
}

BigInt j_count(const VinogradovInstance& inst, const JCountOptions& options) {
  validate_shape(inst.k, inst.m, inst.P);
  if (inst.lambda.size() != inst.m) throw std::invalid_argument("lambda must have m entries");
  return PowerSumHistogram::build(inst.k, inst.m, inst.P, options).correlate(inst.lambda);
}

BigInt j_count_zero(unsigned k, unsigned m, std::uint64_t P, const JCountOptions& options) {
  return j_count({k, m, P, std::vector<std::int64_t>(m, 0)}, options);
}

std::map<PowerSumKey, BigInt> lambda_distribution(unsigned k, unsigned m, std::uint64_t P, std::uint64_t max_pairs,
                                                  const JCountOptions& options) {
  const auto hist = PowerSumHistogram::build(k, m, P, options);
  const auto keys = hist.sorted_keys();
  const double pairs = static_cast<double>(keys.size()) * static_cast<double>(keys.size());
  if (pairs > static_cast<double>(max_pairs)) {
    throw BudgetExceeded("lambda distribution needs " + std::to_string(pairs) + " key pairs", pairs,
                         static_cast<double>(max_pairs));
  }
  if (!products_fit_u128(k, P)) throw BudgetExceeded("lambda distribution counts exceed 126 bits", pairs, 0);
  std::vector<u128> counts;
  counts.reserve(keys.size());
  for (const auto& key : keys) counts.push_back(hist.count(key));

  std::unordered_map<PowerSumKey, u128, PowerSumKeyHash> dist;
  PowerSumKey lambda(m);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = 0; j < keys.size(); ++j) {
      for (unsigned t = 0; t < m; ++t) lambda[t] = keys[i][t] - keys[j][t];
      dist[lambda] += counts[i] * counts[j];
    }
  }
  std::map<PowerSumKey, BigInt> out;
  for (const auto& [key, value] : dist) out.emplace(key, from_u128(value));
  return out;
}

Lemma4Bound lemma4_bound(unsigned m, unsigned tau, std::uint64_t P) {
  if (m == 0 || tau == 0 || P == 0) throw std::invalid_argument("m, tau and P must all be >= 1");
  Lemma4Bound out;
  const double md = m, td = tau;
  const double k = md * td;
  out.log_D = 6.0 * k * std::log(k) + 4.0 * md * (md + 1.0) * td * std::log(2.0 * md);
  out.Delta = 0.5 * md * (md + 1.0) * (1.0 - std::pow(1.0 - 1.0 / md, td));
  out.log_bound = out.log_D + (2.0 * k - out.Delta) * std::log(static_cast<double>(P));
  return out;
}

Lemma4Check lemma4_check(unsigned m, unsigned tau, std::uint64_t P, const JCountOptions& options) {
  const Lemma4Bound bound = lemma4_bound(m, tau, P);
  Lemma4Check out;
  out.count = j_count_zero(m * tau, m, P, options);
  out.log_bound = bound.log_bound;
  out.holds = log_big(out.count) <= out.log_bound;
  return out;
}

}  // namespace kls
