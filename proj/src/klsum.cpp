#include "kls/klsum.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "kls/bounds.hpp"
#include "kls/parallel.hpp"

namespace kls {

SumSpec::SumSpec(FactoredInteger q, std::uint64_t N, const BigInt& a, const BigInt& b, BigInt c)
    : q_(std::move(q)), d_(kernel(q_)), N_(N), c_(std::move(c)) {
  if (q_.value() < 2) throw std::invalid_argument("modulus must be >= 2");
  if (N_ == 0) throw std::invalid_argument("N must be >= 1");
  a_ = mod_floor(a, q_.value());
  b_ = mod_floor(b, q_.value());
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), q_.value().get_mpz_t());
  if (g != 1) throw NotCoprime("gcd(a, q) = " + g.get_str() + ", expected 1");
}

namespace {

struct ChunkResult {
  SumAccumulator acc;
  std::uint64_t counted = 0;
  std::uint64_t skipped = 0;
};

constexpr std::uint64_t kFastModulusLimit = std::uint64_t{1} << 63;
constexpr std::uint64_t kCoprimeTableLimit = std::uint64_t{1} << 22;

// All residues are u64; q < 2^63.
struct FastKernel {
  std::uint64_t q, d, a, b;
  std::uint64_t c_mod_q, c_mod_d;
  std::vector<std::uint8_t> coprime;  // indexed by n mod d when d is small

  bool is_coprime(std::uint64_t n_mod_d) const {
    return coprime.empty() ? std::gcd(n_mod_d, d) == 1 : coprime[n_mod_d] != 0;
  }
};

template <bool kExtended>
void add_phase(SumAccumulator& acc, std::uint64_t r, std::uint64_t q) {
  if constexpr (kExtended) {
    const long double num = r > q / 2 ? -static_cast<long double>(q - r) : static_cast<long double>(r);
    const long double angle = 2 * std::numbers::pi_v<long double> * (num / static_cast<long double>(q));
    acc.add(static_cast<double>(std::cos(angle)), static_cast<double>(std::sin(angle)));
  } else {
    const double num = r > q / 2 ? -static_cast<double>(q - r) : static_cast<double>(r);
    const double angle = 2 * std::numbers::pi * (num / static_cast<double>(q));
    acc.add(std::cos(angle), std::sin(angle));
  }
}

template <bool kExtended>
ChunkResult eval_chunk_fast(const FastKernel& k, std::uint64_t offset, std::uint64_t len) {
  ChunkResult out;
  // first n of the chunk is c + 1 + offset
  auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k.c_mod_q) + 1 + offset) % k.q);
  auto rd = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k.c_mod_d) + 1 + offset) % k.d);
  for (std::uint64_t i = 0; i < len; ++i) {
    if (k.is_coprime(rd)) {
      const std::uint64_t inv = mod_inverse_u64(r, k.q);
      const auto arg = static_cast<std::uint64_t>(
          (static_cast<unsigned __int128>(k.a) * inv + static_cast<unsigned __int128>(k.b) * r) % k.q);
      add_phase<kExtended>(out.acc, arg, k.q);
      ++out.counted;
    } else {
      ++out.skipped;
    }
    if (++r == k.q) r = 0;
    if (++rd == k.d) rd = 0;
  }
  return out;
}

ChunkResult eval_chunk_big(const SumSpec& spec, std::uint64_t offset, std::uint64_t len, int bits) {
  ChunkResult out;
  const BigInt& q = spec.q().value();
  const BigInt& d = spec.d().value();
  BigInt n = spec.c() + 1 + from_u64(offset);
  BigInt g, inv, arg;
  for (std::uint64_t i = 0; i < len; ++i, ++n) {
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (g != 1) {
      ++out.skipped;
      continue;
    }
    inv = mod_inverse(n, q);
    arg = spec.a() * inv + spec.b() * n;
    const ComplexEstimate term = e_q(arg, q, bits);
    out.acc.add(term.re, term.im);
    ++out.counted;
  }
  return out;
}

}  // namespace

SumResult eval_sum(const SumSpec& spec, const EvalOptions& options) {
  const double per_term = term_error(options.precision_bits);
  const std::uint64_t N = spec.N();
  const std::size_t num_chunks = (N + kChunkTerms - 1) / kChunkTerms;
  const bool extended = options.precision_bits > 53;

  std::vector<ChunkResult> chunks;
  if (spec.q().value() < from_u64(kFastModulusLimit)) {
    FastKernel k;
    k.q = to_u64(spec.q().value());
    k.d = to_u64(spec.d().value());
    k.a = to_u64(spec.a());
    k.b = to_u64(spec.b());
    k.c_mod_q = to_u64(mod_floor(spec.c(), spec.q().value()));
    k.c_mod_d = to_u64(mod_floor(spec.c(), spec.d().value()));
    if (k.d <= kCoprimeTableLimit) {
      k.coprime.resize(k.d);
      for (std::uint64_t r = 0; r < k.d; ++r) k.coprime[r] = std::gcd(r, k.d) == 1;
    }
    chunks = map_chunks<ChunkResult>(num_chunks, options.threads, [&](std::size_t i) {
      const std::uint64_t offset = i * kChunkTerms;
      const std::uint64_t len = std::min(kChunkTerms, N - offset);
      return extended ? eval_chunk_fast<true>(k, offset, len) : eval_chunk_fast<false>(k, offset, len);
    });
  } else {
    chunks = map_chunks<ChunkResult>(num_chunks, options.threads, [&](std::size_t i) {
      const std::uint64_t offset = i * kChunkTerms;
      return eval_chunk_big(spec, offset, std::min(kChunkTerms, N - offset), options.precision_bits);
    });
  }

  SumAccumulator total;
  SumResult out;
  for (const auto& c : chunks) {
    total.merge(c.acc);
    out.terms_counted += c.counted;
    out.skipped += c.skipped;
  }
  total.charge_term_error(static_cast<double>(out.terms_counted) * per_term);
  out.value = total.result();
  return out;
}

ShiftedSpec shift_to_kernel(const SumSpec& spec) {
  const BigInt& d = spec.d().value();
  BigInt base;
  mpz_fdiv_q(base.get_mpz_t(), spec.c().get_mpz_t(), d.get_mpz_t());
  BigInt aligned = base * d;
  BigInt shift = spec.c() - aligned;
  return {spec.with_c(std::move(aligned)), std::move(shift)};
}

std::vector<ScanRow> scan(const FactoredInteger& q, const BigInt& a, const BigInt& b, const BigInt& c,
                          std::span<const std::uint64_t> N_values, const EvalOptions& options) {
  std::vector<ScanRow> rows;
  rows.reserve(N_values.size());
  for (const std::uint64_t N : N_values) {
    const SumSpec spec(q, N, a, b, c);
    const SumResult r = eval_sum(spec, options);
    const BoundReport bound = theorem1_bound(q, from_u64(N));
    ScanRow row;
    row.N = N;
    row.value = r.value;
    row.abs = r.value.abs();
    row.terms = r.terms_counted;
    row.trivial = r.terms_counted;
    row.thm1_bound = bound.bound_value;
    row.thm1_applicable = bound.applicable;
    row.ratio = r.terms_counted == 0 ? 0.0 : row.abs / static_cast<double>(r.terms_counted);
    rows.push_back(row);
  }
  return rows;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string scan_csv(std::span<const ScanRow> rows) {
  std::string out = kScanCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.N) + ',' + format_double(r.value.re) + ',' + format_double(r.value.im) + ',' +
           format_double(r.abs) + ',' + std::to_string(r.terms) + ',' + std::to_string(r.trivial) + ',' +
           format_double(r.thm1_bound) + ',' + (r.thm1_applicable ? "true" : "false") + ',' +
           format_double(r.ratio) + '\n';
  }
  return out;
}

}  // namespace kls
