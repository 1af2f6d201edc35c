#include "kls/weyl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kls/parallel.hpp"

namespace kls {

namespace {

using u128 = unsigned __int128;

bool fits_u128(const BigInt& x, unsigned bits = 126) {
  return sgn(x) >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= bits;
}

u128 to_u128(const BigInt& x) {
  u128 out = 0;
  std::size_t count = 0;
  std::uint64_t limbs[2] = {0, 0};
  mpz_export(limbs, &count, -1, sizeof(std::uint64_t), 0, 0, x.get_mpz_t());
  out = (static_cast<u128>(limbs[1]) << 64) | limbs[0];
  return out;
}

double u128_to_double(u128 x) {
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(x >> 64)), 64) +
         static_cast<double>(static_cast<std::uint64_t>(x));
}

// min(cap, L / dist) for dist = min(r, L - r) > 0, compared exactly enough
// that the cap is never crossed by rounding in the wrong direction.
double capped_reciprocal(double cap, double L, double dist) {
  const double recip = L / dist;
  return recip < cap ? recip : cap;
}

}  // namespace

Rational dist_to_int(const Rational& x) {
  const Rational f = x.frac();
  const Rational g = Rational(1) - f;
  return f < g ? f : g;
}

double dist_to_int(double x) {
  const double f = x - std::floor(x);
  return std::min(f, 1.0 - f);
}

GeometricSumCheck geometric_sum_check(const Rational& alpha, std::uint64_t P, int precision_bits) {
  if (P == 0) throw std::invalid_argument("P must be >= 1");
  GeometricSumCheck out;
  const Rational frac = alpha.frac();
  const BigInt& Q = frac.den();
  SumAccumulator acc;
  if (fits_u64(Q) && Q < from_u64(std::uint64_t{1} << 63)) {
    const std::uint64_t q = to_u64(Q);
    const std::uint64_t step = to_u64(frac.num());
    std::uint64_t r = 0;
    for (std::uint64_t n = 1; n <= P; ++n) {
      r += step;
      if (r >= q) r -= q;
      acc.add(unit_phase(r, q, precision_bits));
    }
  } else {
    for (std::uint64_t n = 1; n <= P; ++n) acc.add(e_q(frac.num() * from_u64(n), Q, precision_bits));
  }
  out.sum = acc.result();
  const Rational dist = dist_to_int(alpha);
  out.bound = static_cast<double>(P);
  if (dist > Rational(0)) {
    const double recip = (Rational(1) / dist).to_double();
    out.bound = std::min(out.bound, recip);
  }
  out.holds = out.sum.abs() <= out.bound + out.sum.err;
  return out;
}

RationalApproximation rational_approx(const Rational& alpha, const BigInt& Q_max) {
  if (Q_max < 1) throw std::invalid_argument("Q_max must be >= 1");
  // Convergents p_k/q_k via the standard recurrence.
  BigInt p_prev = 1, q_prev = 0;  // p_{-1}, q_{-1}
  BigInt p = alpha.floor(), q = 1;
  Rational rest = alpha - Rational(p, BigInt(1));
  while (rest != Rational(0)) {
    const Rational inv = Rational(1) / rest;
    const BigInt a = inv.floor();
    const BigInt q_next = a * q + q_prev;
    if (q_next > Q_max) break;
    const BigInt p_next = a * p + p_prev;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    rest = inv - Rational(a, BigInt(1));
  }
  RationalApproximation out;
  out.A = p;
  out.Q = q;
  out.theta_exact = (alpha - Rational(p, q)) * Rational(q * q, BigInt(1));
  out.theta = out.theta_exact.to_double();
  BigInt g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw std::logic_error("convergent not in lowest terms");
  const Rational abs_theta = out.theta_exact < Rational(0) ? -out.theta_exact : out.theta_exact;
  if (abs_theta > Rational(1)) throw std::logic_error("convergent violates |theta| <= 1");
  return out;
}

RationalApproximation rational_approx(double alpha, const BigInt& Q_max) {
  return rational_approx(Rational::from_double(alpha), Q_max);
}

Lemma3Check lemma3_check(const Rational& alpha, const Rational& beta, double U, std::uint64_t P,
                         const RationalApproximation& approx) {
  if (P == 0) throw std::invalid_argument("P must be >= 1");
  if (!(U > 0)) throw std::invalid_argument("U must be positive");
  Lemma3Check out;
  // alpha n + beta = (A' n + B') / L over the common denominator L.
  const Rational fa = alpha.frac();
  const Rational fb = beta.frac();
  BigInt L;
  mpz_lcm(L.get_mpz_t(), fa.den().get_mpz_t(), fb.den().get_mpz_t());
  const BigInt step = fa.num() * (L / fa.den());
  const BigInt start = fb.num() * (L / fb.den());
  double lhs = 0.0;
  if (fits_u128(L)) {
    const u128 l = to_u128(L), s = to_u128(step);
    const double ld = u128_to_double(l);
    u128 r = to_u128(start);
    for (std::uint64_t n = 1; n <= P; ++n) {
      r += s;
      if (r >= l) r -= l;
      const u128 dist = std::min(r, l - r);
      lhs += dist == 0 ? U : capped_reciprocal(U, ld, u128_to_double(dist));
    }
  } else {
    for (std::uint64_t n = 1; n <= P; ++n) {
      const Rational d = dist_to_int(alpha * Rational(from_u64(n), BigInt(1)) + beta);
      lhs += d == Rational(0) ? U : std::min(U, (Rational(1) / d).to_double());
    }
  }
  const double Q = approx.Q.get_d();
  out.lhs = lhs;
  out.rhs = 6.0 * (static_cast<double>(P) / Q + 1.0) * (U + Q * std::log(Q));
  out.holds = out.lhs <= out.rhs;
  return out;
}

double damping_delta(double ln_q, double ln_Q, double ln_Lambda) {
  const double t1 = std::exp(-0.5 * ln_Q);
  const double t2 = std::exp(0.5 * ln_Q - std::numbers::ln2 - ln_Lambda);
  const double s = t1 + t2;
  return 6.0 * ln_q * s * s;
}

double damping_delta_product_form(double ln_q, double Q, double Lambda) {
  return 6.0 * ln_q * (1.0 / Q + 1.0 / (2.0 * Lambda)) * (1.0 + Q / (2.0 * Lambda));
}

DampingFactor damping_factor(const FactoredInteger& q, const FactoredInteger& Q_r, const BigInt& Lambda,
                             std::size_t r) {
  if (Lambda < 1) throw std::invalid_argument("Lambda must be >= 1");
  DampingFactor out;
  out.r = r;
  out.Lambda = Lambda;
  out.Q = Q_r;
  out.delta = damping_delta(q.log(), Q_r.log(), log_big(Lambda));
  out.Delta = std::min(1.0, out.delta);
  return out;
}

double v_sum(const Rational& alpha, std::uint64_t Lambda, unsigned threads) {
  if (Lambda == 0) throw std::invalid_argument("Lambda must be >= 1");
  const Rational fa = alpha.frac();
  const BigInt& Q = fa.den();
  const double cap = 2.0 * static_cast<double>(Lambda);
  if (!fits_u128(Q, 63)) {
    double total = cap;
    for (std::uint64_t mu = 1; mu < Lambda; ++mu) {
      const Rational d = dist_to_int(fa * Rational(from_u64(mu), BigInt(1)));
      total += 2 * (d == Rational(0) ? cap : std::min(cap, (Rational(1) / d).to_double()));
    }
    return total;
  }
  const u128 l = to_u128(Q), s = to_u128(fa.num());
  const double ld = u128_to_double(l);
  // mu and -mu contribute equally; sum mu = 1..Lambda-1 in fixed chunks.
  constexpr std::uint64_t kChunk = std::uint64_t{1} << 16;
  const std::uint64_t count = Lambda - 1;
  const std::size_t chunks = (count + kChunk - 1) / kChunk;
  auto partial = map_chunks<double>(chunks, threads, [&](std::size_t c) {
    const std::uint64_t first = 1 + c * kChunk;
    const std::uint64_t last = std::min(count, (c + 1) * kChunk);
    u128 r = static_cast<u128>((static_cast<unsigned __int128>(s % l) * (first % l)) % l);
    double acc = 0.0;
    for (std::uint64_t mu = first; mu <= last; ++mu) {
      const u128 dist = std::min(r, l - r);
      acc += dist == 0 ? cap : capped_reciprocal(cap, ld, u128_to_double(dist));
      r += s;
      if (r >= l) r -= l;
    }
    return acc;
  });
  double total = cap;  // mu = 0
  for (double p : partial) total += 2 * p;
  return total;
}

}  // namespace kls
