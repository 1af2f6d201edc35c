#include "kls/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kls/parallel.hpp"
#include "kls/postnikov.hpp"

namespace kls {

ModulusLogs ModulusLogs::of(const FactoredInteger& q) { return {q.log(), kernel(q).log()}; }

namespace {

// b1^e1 <= b2^e2 for positive integers; decided by logarithms unless the two
// sides are too close to call, then by exact powers.
bool power_leq(const BigInt& b1, std::uint64_t e1, const BigInt& b2, std::uint64_t e2) {
  const double l1 = static_cast<double>(e1) * log_big(b1);
  const double l2 = static_cast<double>(e2) * log_big(b2);
  if (std::fabs(l1 - l2) > 1e-9 * std::max({1.0, std::fabs(l1), std::fabs(l2)})) return l1 < l2;
  BigInt lhs, rhs;
  mpz_pow_ui(lhs.get_mpz_t(), b1.get_mpz_t(), e1);
  mpz_pow_ui(rhs.get_mpz_t(), b2.get_mpz_t(), e2);
  return lhs <= rhs;
}

double big_to_double(const BigInt& x) {
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 1020) return std::numeric_limits<double>::infinity();
  return x.get_d();
}

BoundReport finish(double gamma, double gamma1, double ln_q, const BigInt& N) {
  BoundReport out;
  out.gamma = gamma;
  out.gamma1 = gamma1;
  const double ln_N = log_big(N);
  const double exponent = gamma * ln_N * ln_N * ln_N / (ln_q * ln_q);
  out.log_bound = ln_N - exponent;
  out.bound_value = big_to_double(N) * std::exp(-exponent);
  return out;
}

void require_modulus(const BigInt& N, double ln_q) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  if (!(ln_q > 0)) throw std::invalid_argument("q must be >= 2");
}

void record(BoundReport& report, bool ok, const char* name) {
  if (!ok) report.failed_conditions.emplace_back(name);
}

}  // namespace

BoundReport theorem1_bound(const FactoredInteger& q, const BigInt& N) {
  const double ln_q = q.log();
  require_modulus(N, ln_q);
  BoundReport out = finish(kTheorem1Gamma, kTheorem1Gamma1, ln_q, N);
  const BigInt d = kernel(q).value();
  record(out, power_leq(d, 15, N, 1), kCondKernelPower);
  record(out, kTheorem1Gamma1 * std::cbrt(ln_q * ln_q) <= log_big(N), kCondLowerThreshold);
  record(out, N * N <= q.value(), kCondUpperSqrt);
  out.applicable = out.failed_conditions.empty();
  return out;
}

BoundReport theorem1_bound(const ModulusLogs& q, const BigInt& N) {
  require_modulus(N, q.ln_q);
  BoundReport out = finish(kTheorem1Gamma, kTheorem1Gamma1, q.ln_q, N);
  const double ln_N = log_big(N);
  record(out, 15.0 * q.ln_d <= ln_N, kCondKernelPower);
  record(out, kTheorem1Gamma1 * std::cbrt(q.ln_q * q.ln_q) <= ln_N, kCondLowerThreshold);
  record(out, 2.0 * ln_N <= q.ln_q, kCondUpperSqrt);
  out.applicable = out.failed_conditions.empty();
  return out;
}

Theorem2Constants theorem2_constants(const Rational& delta) {
  if (delta <= Rational(0) || delta >= Rational(1, 10)) {
    throw DeltaOutOfRange("delta must satisfy 0 < delta < 0.1, got " + delta.to_string());
  }
  const double dl = delta.to_double();
  const double L = std::log(1.0 / dl);
  const double g201 = 201.0 * 201.0 * 201.0 * 201.0;
  return {std::pow(dl, 6) * L * L / g201, 1200.0 / (dl * dl) * std::cbrt(L * L)};
}

BoundReport theorem2_bound(const FactoredInteger& q, const BigInt& N, const Rational& delta) {
  const auto [gamma, gamma1] = theorem2_constants(delta);
  const double ln_q = q.log();
  require_modulus(N, ln_q);
  BoundReport out = finish(gamma, gamma1, ln_q, N);
  const BigInt d = kernel(q).value();
  const BigInt num = delta.num(), den = delta.den();
  // d^(2 + delta) <= N  <=>  d^(2 den + num) <= N^den
  record(out, power_leq(d, BigInt(2 * den + num).get_ui(), N, den.get_ui()), kCondKernelPower);
  record(out, gamma1 * std::cbrt(ln_q * ln_q) <= log_big(N), kCondLowerThreshold);
  // N <= q^(delta/20)  <=>  N^(20 den) <= q^num
  record(out, power_leq(N, BigInt(20 * den).get_ui(), q.value(), num.get_ui()), kCondUpperPower);
  out.applicable = out.failed_conditions.empty();
  return out;
}

BoundReport theorem2_bound(const ModulusLogs& q, const BigInt& N, const Rational& delta) {
  const auto [gamma, gamma1] = theorem2_constants(delta);
  require_modulus(N, q.ln_q);
  BoundReport out = finish(gamma, gamma1, q.ln_q, N);
  const double dl = delta.to_double();
  const double ln_N = log_big(N);
  record(out, (2.0 + dl) * q.ln_d <= ln_N, kCondKernelPower);
  record(out, gamma1 * std::cbrt(q.ln_q * q.ln_q) <= ln_N, kCondLowerThreshold);
  record(out, ln_N <= dl / 20.0 * q.ln_q, kCondUpperPower);
  out.applicable = out.failed_conditions.empty();
  return out;
}

Rational log_ratio(const FactoredInteger& q, const BigInt& N, bool* exact) {
  if (N < 1) throw std::invalid_argument("N must be >= 1");
  auto set_exact = [&](bool v) {
    if (exact) *exact = v;
  };
  if (N == 1) {
    set_exact(true);
    return Rational(0);
  }
  // Strip the primes of q from N; the ratio is exact when nothing else is
  // left and every exponent is the same multiple of q's.
  BigInt rest = N;
  std::optional<Rational> common;
  bool proportional = q.num_primes() > 0;
  for (const auto& pp : q.factors()) {
    if (!proportional) break;
    const BigInt p = from_u64(pp.prime);
    unsigned long e = mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    const Rational r(BigInt(e), BigInt(pp.exponent));
    if (common && !(*common == r)) proportional = false;
    common = r;
  }
  if (proportional && rest == 1 && common) {
    set_exact(true);
    return *common;
  }
  set_exact(false);
  return Rational::from_double(log_big(N) / q.log());
}

namespace {

std::uint64_t floor_u64(const Rational& x, const char* what) {
  const BigInt f = x.floor();
  if (sgn(f) < 0 || !fits_u64(f)) throw std::overflow_error(std::string(what) + " out of 64-bit range");
  return to_u64(f);
}

}  // namespace

ProofParameters proof_parameters_from_ratio(const Rational& ratio, const BigInt& N,
                                            const std::optional<Rational>& delta) {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  ProofParameters p;
  p.log_ratio = ratio;
  if (delta) {
    theorem2_constants(*delta);  // range check
    const Rational& dl = *delta;
    p.c = dl / Rational(5) * (Rational(1) - dl / Rational(15));
    p.c1 = Rational(2) * dl / Rational(5) * (Rational(1) - dl / Rational(20));
    p.c2 = Rational(2) * dl / Rational(5);
    p.kappa = static_cast<std::uint64_t>(std::floor(4.0 * std::log(1.0 / dl.to_double()))) + 14;
  } else {
    p.c = Rational(1, 7);
    p.c1 = Rational(1, 3);
    p.c2 = Rational(2, 3);
    p.kappa = 10;
  }
  p.eps = p.c * ratio;
  if (p.eps <= Rational(0) || p.eps >= Rational(1)) {
    throw std::invalid_argument("eps = " + p.eps.to_string() + " outside (0, 1); need 1 < N < q");
  }
  p.m = floor_u64(Rational(2) / p.eps, "m");
  p.r1 = floor_u64(p.c1 / p.eps, "r1");
  p.r2 = floor_u64(p.c2 / p.eps, "r2");
  const unsigned __int128 tau = static_cast<unsigned __int128>(p.kappa) * p.m;
  const unsigned __int128 k = tau * p.m;
  if (k >> 64) throw std::overflow_error("k = kappa m^2 out of 64-bit range");
  p.tau = static_cast<std::uint64_t>(tau);
  p.k = static_cast<std::uint64_t>(k);
  mpz_root(p.h.get_mpz_t(), N.get_mpz_t(), 4);
  p.h += 1;
  p.r1_positive = p.r1 >= 1;
  p.gap_positive = p.r2 >= p.r1 + 1;
  return p;
}

ProofParameters proof_parameters(const FactoredInteger& q, const BigInt& N, const std::optional<Rational>& delta) {
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (q.value() <= N) throw std::invalid_argument("need q > N");
  bool exact = false;
  const Rational ratio = log_ratio(q, N, &exact);
  auto p = proof_parameters_from_ratio(ratio, N, delta);
  p.log_ratio_exact = exact;
  return p;
}

double log_holder_constant(std::uint64_t k, std::uint64_t m) {
  if (m < 1 || k < m) throw std::invalid_argument("holder constant needs k >= m >= 1");
  const double kd = static_cast<double>(k), md = static_cast<double>(m);
  const double log_c = 12.0 * kd * std::log(kd) + 4.0 * kd * (md + 1.0) * std::log(2.0 * md) +
                       2.0 * md * std::log(2.0 * kd);
  return log_c / (4.0 * kd * kd);
}

double holder_constant(std::uint64_t k, std::uint64_t m) {
  const double value = std::exp(log_holder_constant(k, m));
  if (m >= 28 && k == 10 * m * m && !(value < 1.02)) {
    throw std::logic_error("C(k,m)^(1/(4k^2)) >= 1.02 at m = " + std::to_string(m));
  }
  return value;
}

AmplifiedBound amplified_bound(const SumSpec& spec, const Rational& eps, std::uint64_t h,
                               const AmplifyOptions& options) {
  if (h == 0) throw std::invalid_argument("h must be >= 1");
  if (mod_floor(spec.c(), spec.d().value()) != 0) {
    throw std::invalid_argument("amplified_bound needs c = 0 (mod d); apply shift_to_kernel first");
  }
  const double cost = static_cast<double>(spec.N()) * static_cast<double>(h) * static_cast<double>(h);
  if (cost > static_cast<double>(options.budget)) {
    throw BudgetExceeded("amplified bound needs " + std::to_string(cost) + " term evaluations", cost,
                         static_cast<double>(options.budget));
  }
  const PostnikovContext ctx = make_context(spec.q(), eps);
  const BigInt& q = spec.q().value();

  struct Partial {
    double sum = 0.0;
    std::uint64_t evaluations = 0;
  };
  constexpr std::uint64_t kBlock = 64;
  const std::uint64_t N = spec.N();
  const std::size_t blocks = (N + kBlock - 1) / kBlock;
  const WeylSumOptions inner{1, options.precision_bits};
  auto partials = map_chunks<Partial>(blocks, options.threads, [&](std::size_t b) {
    Partial part;
    BigInt g;
    const std::uint64_t last = std::min(N, (b + 1) * kBlock);
    for (std::uint64_t n = b * kBlock + 1; n <= last; ++n) {
      const BigInt nn = from_u64(n);
      const BigInt u = nn + spec.c();
      mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), q.get_mpz_t());
      if (g != 1) continue;
      part.sum += w_direct(nn, spec, ctx, h, inner).abs();
      ++part.evaluations;
    }
    return part;
  });

  AmplifiedBound out;
  out.h = h;
  out.q_eps = ctx.q_eps.value();
  for (const auto& p : partials) {
    out.sum_abs_w += p.sum;
    out.w_evaluations += p.evaluations;
  }
  const double hh = static_cast<double>(h) * static_cast<double>(h);
  out.rhs = out.sum_abs_w / hh + hh * out.q_eps.get_d();
  out.lhs = eval_sum(spec, {options.threads, options.precision_bits}).value.abs();
  out.holds = out.lhs <= out.rhs * (1.0 + kAmplifiedTolerance);
  return out;
}

namespace {

RegimeReport regime_core(double ln_q, double ln_d, double ln_upper, const std::optional<Rational>& delta) {
  RegimeReport out;
  out.ln_q = ln_q;
  out.ln_d = ln_d;
  out.delta = delta;
  out.ln_upper = ln_upper;
  if (delta) {
    const auto [gamma, gamma1] = theorem2_constants(*delta);
    (void)gamma;
    out.ln_kernel_threshold = (2.0 + delta->to_double()) * ln_d;
    out.ln_exp_threshold = gamma1 * std::cbrt(ln_q * ln_q);
  } else {
    out.ln_kernel_threshold = 15.0 * ln_d;
    out.ln_exp_threshold = kTheorem1Gamma1 * std::cbrt(ln_q * ln_q);
  }
  const double lower = std::max(out.ln_kernel_threshold, out.ln_exp_threshold);
  out.window_nonempty = lower <= out.ln_upper;
  out.binding_constraint =
      out.ln_exp_threshold >= out.ln_kernel_threshold ? kCondLowerThreshold : kCondKernelPower;
  return out;
}

}  // namespace

RegimeReport regime_report(const ModulusLogs& q, const std::optional<Rational>& delta) {
  if (!(q.ln_q > 0)) throw std::invalid_argument("ln q must be positive");
  const double upper = delta ? delta->to_double() / 20.0 * q.ln_q : 0.5 * q.ln_q;
  return regime_core(q.ln_q, q.ln_d, upper, delta);
}

RegimeReport regime_report(const FactoredInteger& q, const std::optional<Rational>& delta) {
  if (q.value() < 2) throw std::invalid_argument("q must be >= 2");
  const ModulusLogs logs = ModulusLogs::of(q);
  double upper = 0.0;
  if (delta) {
    upper = delta->to_double() / 20.0 * logs.ln_q;
  } else {
    BigInt root;
    mpz_sqrt(root.get_mpz_t(), q.value().get_mpz_t());  // largest admissible integer N
    upper = log_big(root);
  }
  return regime_core(logs.ln_q, logs.ln_d, upper, delta);
}

double theorem1_crossover_ln_q() {
  // f(L) = L/2 - gamma1 L^(2/3) changes sign once on (0, inf).
  auto f = [](double L) { return 0.5 * L - kTheorem1Gamma1 * std::cbrt(L * L); };
  double lo = 1.0, hi = 1e13;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

bool theorem1_window_empty_below(double ln_q_max) { return ln_q_max < theorem1_crossover_ln_q(); }

}  // namespace kls
