#pragma once

// Seeded generator for the randomized suites: std::mt19937_64 (fully
// specified by the C++ standard) with bounded draws done here rather than by
// the implementation-defined std::uniform_*_distribution, so a seed replays
// identically across toolchains.

#include <cstdint>
#include <random>
#include <span>

#include "kls/bigint.hpp"

namespace kls {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, n), n >= 1 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 product = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(product);
    if (low < n) {
      const std::uint64_t threshold = -n % n;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Uniform on [lo, hi].
  std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  /// Uniform on [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1p-53; }

  /// Uniform on [0, n) for a positive big integer (rejection on a bit mask).
  BigInt big_below(const BigInt& n);

  template <class T>
  const T& pick(std::span<const T> items) {
    return items[below(items.size())];
  }

 private:
  std::mt19937_64 engine_;
};

inline BigInt Rng::big_below(const BigInt& n) {
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  const std::size_t words = (bits + 63) / 64;
  for (;;) {
    BigInt x = 0;
    for (std::size_t i = 0; i < words; ++i) x = (x << 64) + from_u64(next());
    const std::size_t excess = words * 64 - bits;
    if (excess > 0) x >>= excess;
    if (x < n) return x;
  }
}

}  // namespace kls
