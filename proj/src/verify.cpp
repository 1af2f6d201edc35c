#include "kls/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>

#include "kls/bounds.hpp"
#include "kls/klsum.hpp"
#include "kls/postnikov.hpp"
#include "kls/vmvt.hpp"
#include "kls/weyl.hpp"

namespace kls {

namespace {

constexpr std::array<std::uint64_t, 6> kSmallPrimes = {2, 3, 5, 7, 11, 13};

BigInt pow_u64(std::uint64_t p, unsigned e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), from_u64(p).get_mpz_t(), e);
  return out;
}

FactoredInteger from_exponents(const std::map<std::uint64_t, unsigned>& exps) {
  std::vector<PrimePower> f;
  for (const auto& [p, e] : exps) {
    if (e > 0) f.push_back({p, e});
  }
  return FactoredInteger(std::move(f));
}

BigInt value_of(const std::map<std::uint64_t, unsigned>& exps) {
  BigInt v = 1;
  for (const auto& [p, e] : exps) v *= pow_u64(p, e);
  return v;
}

std::uint64_t random_prime(Rng& rng, std::uint64_t below) {
  for (;;) {
    std::uint64_t n = rng.between(3, below) | 1;
    while (!is_prime_u64(n)) n += 2;
    if (n < below) return n;
  }
}

// <= 4 primes, exponents <= 32, value <= 2^128.
FactoredInteger random_lemma1_modulus(Rng& rng) {
  const BigInt limit = BigInt(1) << 128;
  std::map<std::uint64_t, unsigned> exps;
  const auto count = rng.between(1, 4);
  while (exps.size() < count) {
    const std::uint64_t p = rng.below(2) ? kSmallPrimes[rng.below(kSmallPrimes.size())]
                                         : random_prime(rng, std::uint64_t{1} << 32);
    exps[p] = static_cast<unsigned>(rng.between(1, 32));
  }
  while (value_of(exps) > limit) {
    auto largest = std::max_element(exps.begin(), exps.end(), [](const auto& a, const auto& b) {
      return a.second * std::log(double(a.first)) < b.second * std::log(double(b.first));
    });
    if (--largest->second == 0) exps.erase(largest);
  }
  if (exps.empty()) exps[2] = 1;
  return from_exponents(exps);
}

const std::array<Rational, 5>& lemma1_eps() {
  static const std::array<Rational, 5> eps = {Rational(1, 5), Rational(1, 3), Rational(1, 2), Rational(2, 3),
                                              Rational(4, 5)};
  return eps;
}

std::uint64_t cases_or(const SuiteConfig& c, std::uint64_t fallback) { return c.cases ? c.cases : fallback; }

SuiteReport start_report(const char* name, const SuiteConfig& config) {
  SuiteReport rep;
  rep.suite = name;
  rep.seed = config.seed;
  return rep;
}

SuiteReport suite_lemma1(const SuiteConfig& config) {
  SuiteReport rep = start_report("lemma1", config);
  rep.margin_name = "exact identity (mismatches)";
  Rng rng(config.seed);
  const auto n = cases_or(config, 1000);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto q = random_lemma1_modulus(rng);
    const auto& eps = lemma1_eps()[rng.below(5)];
    const auto ctx = make_context(q, eps);
    const BigInt z = rng.big_below(q.value());
    const BigInt inv = inverse_expansion(z, ctx);
    const BigInt check = mod_floor(inv * (1 + z * ctx.q_eps.value()), q.value());
    ++rep.cases;
    if (check != mod_floor(BigInt(1), q.value())) ++rep.failures;
  }
  rep.worst_margin = static_cast<double>(rep.failures);
  return rep;
}

SuiteReport suite_lemma2(const SuiteConfig& config) {
  SuiteReport rep = start_report("lemma2", config);
  rep.margin_name = "min(bound + err - |sum|)";
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(config.seed);
  const auto n = cases_or(config, 10'000);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t Q = rng.between(1, 1'000'000);
    const Rational alpha(from_u64(rng.below(Q)), from_u64(Q));
    const std::uint64_t P = rng.between(1, 10'000);
    const auto r = geometric_sum_check(alpha, P, config.precision_bits);
    ++rep.cases;
    if (!r.holds) ++rep.failures;
    rep.worst_margin = std::min(rep.worst_margin, r.bound + r.sum.err - r.sum.abs());
  }
  return rep;
}

// (a + b sqrt(D)) / c for non-square D.
double random_surd(Rng& rng) {
  std::uint64_t D;
  do {
    D = rng.between(2, 1000);
  } while (std::sqrt(double(D)) == std::floor(std::sqrt(double(D))));
  const double a = double(rng.between(0, 100)) - 50.0;
  const double b = double(rng.between(1, 50));
  const double c = double(rng.between(1, 97));
  return (a + b * std::sqrt(double(D))) / c;
}

SuiteReport suite_lemma3(const SuiteConfig& config) {
  SuiteReport rep = start_report("lemma3", config);
  rep.margin_name = "min((rhs - lhs) / rhs)";
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(config.seed);
  const auto n = cases_or(config, 10'000);
  std::uint64_t irrational = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    Rational alpha;
    if (i % 2 == 0) {
      const std::uint64_t Q = rng.between(1, 1'000'000);
      alpha = Rational(from_u64(rng.below(Q)), from_u64(Q));
    } else {
      alpha = Rational::from_double(random_surd(rng));
      ++irrational;
    }
    const std::uint64_t bq = rng.between(1, 1'000'000);
    const Rational beta(from_u64(rng.below(bq)), from_u64(bq));
    const BigInt Q_max = from_u64(rng.between(1, 10'000));
    const auto approx = rational_approx(alpha, Q_max);
    const double U = 1.0 + rng.unit() * 1e4;
    const std::uint64_t P = rng.between(1, 10'000);
    const auto r = lemma3_check(alpha, beta, U, P, approx);
    ++rep.cases;
    if (!r.holds || std::fabs(approx.theta) > 1.0) ++rep.failures;
    rep.worst_margin = std::min(rep.worst_margin, (r.rhs - r.lhs) / r.rhs);
  }
  rep.extras.emplace_back("irrational_trials", double(irrational));
  return rep;
}

SuiteReport suite_lemma4(const SuiteConfig& config) {
  SuiteReport rep = start_report("lemma4", config);
  rep.margin_name = "min(log_bound - ln J)";
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const JCountOptions opts{config.budget, config.threads};
  for (unsigned m = 1; m <= 3; ++m) {
    for (unsigned tau = 1; tau <= 3; ++tau) {
      for (std::uint64_t P = 2; P <= 8; ++P) {
        const auto r = lemma4_check(m, tau, P, opts);
        ++rep.cases;
        if (!r.holds) ++rep.failures;
        rep.worst_margin = std::min(rep.worst_margin, r.log_bound - log_big(r.count));
      }
    }
  }
  return rep;
}

SuiteReport suite_w_identity(const SuiteConfig& config) {
  SuiteReport rep = start_report("w-identity", config);
  rep.margin_name = "max |w_direct - e_q(a v) w_poly|";
  Rng rng(config.seed);
  const auto n = cases_or(config, 200);
  const BigInt limit("1000000000000");
  const WeylSumOptions opts{config.threads, config.precision_bits};
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto q = random_powerful_modulus(rng, limit);
    const auto& eps = lemma1_eps()[rng.below(5)];
    const auto ctx = make_context(q, eps);
    const SumSpec spec(q, 1, random_unit(rng, q), rng.big_below(q.value()), rng.big_below(q.value()));
    BigInt nn;
    BigInt g;
    do {
      nn = rng.big_below(q.value()) + 1;
      const BigInt u = nn + spec.c();
      mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), q.value().get_mpz_t());
    } while (g != 1);
    const std::uint64_t h = rng.between(1, 40);
    const auto direct = w_direct(nn, spec, ctx, h, opts);
    const auto coeffs = weyl_coefficients(nn, spec, ctx);
    const auto poly = e_q(coeffs.phase, q.value(), config.precision_bits) * w_poly(coeffs, h, opts);
    const double diff = std::hypot(direct.re - poly.re, direct.im - poly.im);
    ++rep.cases;
    if (!(diff <= 1e-9)) ++rep.failures;
    rep.worst_margin = std::max(rep.worst_margin, diff);
    rep.w_rows.push_back({q.to_string(), eps.to_string(), nn.get_str(), h, direct, poly, diff});
  }
  return rep;
}

SuiteReport suite_amplify(const SuiteConfig& config) {
  SuiteReport rep = start_report("amplify", config);
  rep.margin_name = "min((rhs - lhs) / rhs)";
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(config.seed);
  static const std::array<const char*, 4> moduli = {"3^6", "2^4*3^4", "5^5", "2^10"};
  const std::array<Rational, 2> eps = {Rational(1, 3), Rational(1, 2)};
  const auto n = cases_or(config, 20);
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto q = FactoredInteger::parse(moduli[i % 4]);
    const auto& e = eps[(i / 4) % 2];
    const std::uint64_t N = rng.between(16, 300);
    const SumSpec raw(q, N, random_unit(rng, q), rng.big_below(q.value()), rng.big_below(q.value()));
    const SumSpec spec = shift_to_kernel(raw).spec;
    BigInt h;
    mpz_root(h.get_mpz_t(), from_u64(N).get_mpz_t(), 4);
    const auto r = amplified_bound(spec, e, to_u64(h) + 1, {config.threads, config.precision_bits, config.budget});
    ++rep.cases;
    if (!r.holds) ++rep.failures;
    rep.worst_margin = std::min(rep.worst_margin, (r.rhs - r.lhs) / r.rhs);
  }
  return rep;
}

SuiteReport suite_shift(const SuiteConfig& config) {
  SuiteReport rep = start_report("shift", config);
  rep.margin_name = "max |S - S'| / (2 shift)";
  Rng rng(config.seed);
  const auto n = cases_or(config, 100);
  const EvalOptions opts{config.threads, config.precision_bits};
  std::uint64_t over_d = 0;
  double worst_over_d = 0.0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto q = random_powerful_modulus(rng, BigInt(1'000'000));
    const std::uint64_t N = rng.between(1, 10'000);
    const BigInt c = rng.big_below(q.value() * 4) - q.value() * 2;
    const SumSpec spec(q, N, random_unit(rng, q), rng.big_below(q.value()), c);
    const auto shifted = shift_to_kernel(spec);
    const auto s = eval_sum(spec, opts).value;
    const auto s1 = eval_sum(shifted.spec, opts).value;
    const double diff = std::hypot(s.re - s1.re, s.im - s1.im);
    const double allowed = 2.0 * shifted.shift_amount.get_d();
    const double d = spec.d().value().get_d();
    ++rep.cases;
    if (diff > allowed + s.err + s1.err || allowed > 2.0 * d) ++rep.failures;
    if (allowed > 0) rep.worst_margin = std::max(rep.worst_margin, diff / allowed);
    // |S| <= |S_1| + d as literally stated; reported, not enforced.
    if (s.abs() > s1.abs() + d) ++over_d;
    worst_over_d = std::max(worst_over_d, (s.abs() - s1.abs()) / d);
  }
  rep.extras.emplace_back("cases_exceeding_|S1|+d", double(over_d));
  rep.extras.emplace_back("max_(|S|-|S1|)/d", worst_over_d);
  return rep;
}

using SuiteFn = std::function<SuiteReport(const SuiteConfig&)>;

const std::map<std::string, SuiteFn, std::less<>>& registry() {
  static const std::map<std::string, SuiteFn, std::less<>> suites = {
      {"lemma1", suite_lemma1},         {"lemma2", suite_lemma2}, {"lemma3", suite_lemma3},
      {"lemma4", suite_lemma4},         {"w-identity", suite_w_identity},
      {"amplify", suite_amplify},       {"shift", suite_shift},
  };
  return suites;
}

}  // namespace

FactoredInteger random_powerful_modulus(Rng& rng, const BigInt& limit) {
  if (limit < 4) throw std::invalid_argument("no powerful modulus below 4");
  for (;;) {
    std::map<std::uint64_t, unsigned> exps;
    const auto count = rng.between(1, 3);
    while (exps.size() < count) exps[kSmallPrimes[rng.below(kSmallPrimes.size())]] = 2;
    if (value_of(exps) > limit) continue;
    // grow random exponents while the value stays under the limit
    const auto steps = rng.below(64);
    for (std::uint64_t s = 0; s < steps; ++s) {
      auto it = std::next(exps.begin(), static_cast<long>(rng.below(exps.size())));
      ++it->second;
      if (value_of(exps) > limit) {
        --it->second;
        break;
      }
    }
    return from_exponents(exps);
  }
}

BigInt random_unit(Rng& rng, const FactoredInteger& q) {
  BigInt g;
  for (;;) {
    BigInt x = rng.big_below(q.value());
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), q.value().get_mpz_t());
    if (g == 1) return x;
  }
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

SuiteReport run_suite(std::string_view name, const SuiteConfig& config) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
  return it->second(config);
}

}  // namespace kls
