#include "kls/postnikov.hpp"

#include <algorithm>
#include <string>

#include "kls/errors.hpp"
#include "kls/parallel.hpp"

namespace kls {

PostnikovContext make_context(const FactoredInteger& q, const Rational& eps) {
  PostnikovContext ctx;
  auto smoothing = q_epsilon(q, eps);  // validates 0 < eps < 1
  ctx.eps = eps;
  const BigInt m = (Rational(2) / eps).floor();
  ctx.m = m.get_ui();
  ctx.q = q;
  ctx.q_eps = std::move(smoothing.value);
  ctx.beta = std::move(smoothing.beta);

  const auto factors = q.factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const unsigned __int128 lhs = static_cast<unsigned __int128>(ctx.m + 1) * (ctx.beta[i] + 1);
    if (lhs < factors[i].exponent) {
      throw DivisibilityFailure("q does not divide q_eps^(m+1) at prime " + std::to_string(factors[i].prime));
    }
  }
  return ctx;
}

BigInt inverse_expansion(const BigInt& z, const PostnikovContext& ctx) {
  const BigInt& q = ctx.q.value();
  const BigInt t = mod_floor(z * ctx.q_eps.value(), q);
  // Horner: 1 - t(1 - t(1 - ...)), m levels deep.
  BigInt s = 1;
  for (std::uint64_t j = 0; j < ctx.m; ++j) s = mod_floor(1 - t * s, q);
  return mod_floor(s, q);
}

WeylCoefficients weyl_coefficients(const BigInt& n, const SumSpec& spec, const PostnikovContext& ctx) {
  const BigInt& q = spec.q().value();
  const BigInt& qe = ctx.q_eps.value();
  WeylCoefficients out;
  out.modulus = q;
  out.v = mod_inverse(n + spec.c(), q);
  out.phase = mod_floor(spec.a() * out.v, q);
  out.a.reserve(ctx.m);
  out.a.push_back(mod_floor(qe * (spec.b() - spec.a() * out.v * out.v), q));
  BigInt power = out.phase;  // a v^(r+1) q_eps^r, starting at r = 0
  for (std::uint64_t r = 1; r <= ctx.m; ++r) {
    power = mod_floor(power * out.v * qe, q);
    if (r >= 2) out.a.push_back(r % 2 == 0 ? power : mod_floor(-power, q));
  }
  out.alpha.reserve(out.a.size());
  for (const auto& ar : out.a) out.alpha.emplace_back(ar, q);
  return out;
}

ComplexEstimate w_direct(const BigInt& n, const SumSpec& spec, const PostnikovContext& ctx, std::uint64_t h,
                         const WeylSumOptions& options) {
  const BigInt& q = spec.q().value();
  const BigInt u = n + spec.c();
  BigInt g;
  mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), q.get_mpz_t());
  if (g != 1) throw NotCoprime("gcd(n + c, q) > 1 for n = " + n.get_str());
  const BigInt& qe = ctx.q_eps.value();

  auto rows = map_chunks<SumAccumulator>(h, options.threads, [&](std::size_t row) {
    SumAccumulator acc;
    const BigInt x = from_u64(row + 1);
    for (std::uint64_t y = 1; y <= h; ++y) {
      const BigInt shift = qe * x * from_u64(y);
      const BigInt arg = spec.a() * mod_inverse(u + shift, q) + spec.b() * shift;
      acc.add(e_q(arg, q, options.precision_bits));
    }
    return acc;
  });
  SumAccumulator total;
  for (const auto& r : rows) total.merge(r);
  return total.result();
}

ComplexEstimate w_poly(const WeylCoefficients& coeffs, std::uint64_t h, const WeylSumOptions& options) {
  const BigInt& q = coeffs.modulus;
  const std::size_t m = coeffs.m();
  auto rows = map_chunks<SumAccumulator>(h, options.threads, [&](std::size_t row) {
    SumAccumulator acc;
    for (std::uint64_t y = 1; y <= h; ++y) {
      const BigInt t = from_u64(row + 1) * from_u64(y);
      // numerator of sum_r alpha_r t^r over the common denominator q
      BigInt num = 0;
      for (std::size_t r = m; r-- > 0;) num = mod_floor((num + coeffs.a[r]) * t, q);
      acc.add(e_q(num, q, options.precision_bits));
    }
    return acc;
  });
  SumAccumulator total;
  for (const auto& r : rows) total.merge(r);
  return total.result();
}

DenominatorQ denominator_Q_r(const WeylCoefficients& coeffs, const PostnikovContext& ctx, std::size_t r) {
  if (r < 1 || r > coeffs.m()) {
    throw std::out_of_range("denominator index r = " + std::to_string(r) + " outside [1, " +
                            std::to_string(coeffs.m()) + "]");
  }
  const BigInt& ar = coeffs.a[r - 1];
  std::vector<PrimePower> exact, formula, literal;
  const auto factors = ctx.q.factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto [p, alpha] = factors[i];
    unsigned valuation = alpha;
    if (ar != 0) {
      valuation = static_cast<unsigned>(mpz_remove(BigInt().get_mpz_t(), ar.get_mpz_t(), from_u64(p).get_mpz_t()));
      valuation = std::min(valuation, alpha);
    }
    const auto capped = [&](std::uint64_t sub) -> unsigned {
      return sub >= alpha ? 0 : static_cast<unsigned>(alpha - sub);
    };
    const std::uint64_t e = ctx.beta[i] + 1;
    if (alpha > valuation) exact.push_back({p, alpha - valuation});
    if (unsigned ex = capped(r * e)) formula.push_back({p, ex});
    if (unsigned ex = capped(r * ctx.beta[i])) literal.push_back({p, ex});

    if (r >= 2) {
      if (alpha - valuation > capped(r * e)) {
        throw std::logic_error("exact Q_r does not divide the exponent formula at prime " + std::to_string(p));
      }
      if (static_cast<std::uint64_t>(alpha - valuation) + r * e < alpha) {
        throw std::logic_error("q q_eps^-r <= Q_r fails at prime " + std::to_string(p));
      }
    }
  }
  return {FactoredInteger(std::move(exact)), FactoredInteger(std::move(formula)), FactoredInteger(std::move(literal))};
}

}  // namespace kls
