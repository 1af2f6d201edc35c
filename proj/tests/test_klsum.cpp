#include <gtest/gtest.h>

#include <complex>
#include <numbers>
#include <numeric>

#include "kls/klsum.hpp"
#include "kls/rng.hpp"

namespace kls {
namespace {

// Naive path: inverse by Euler's theorem, phase through std::polar in long
// double, plain summation.
std::complex<long double> naive_sum(const FactoredInteger& q, std::uint64_t N, const BigInt& a, const BigInt& b,
                                    const BigInt& c) {
  BigInt phi = 1;
  for (const auto& pp : q.factors()) {
    BigInt pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), pp.prime, pp.exponent - 1);
    phi *= pk * (pp.prime - 1);
  }
  const BigInt& Q = q.value();
  std::complex<long double> s = 0;
  for (std::uint64_t i = 1; i <= N; ++i) {
    const BigInt n = c + i;
    BigInt g;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), Q.get_mpz_t());
    if (g != 1) continue;
    BigInt nr = mod_floor(n, Q), inv;
    const BigInt e = phi - 1;
    mpz_powm(inv.get_mpz_t(), nr.get_mpz_t(), e.get_mpz_t(), Q.get_mpz_t());
    const BigInt r = mod_floor(a * inv + b * n, Q);
    const long double x = mpq_class(r, Q).get_d();
    s += std::polar(1.0L, 2 * std::numbers::pi_v<long double> * x);
  }
  return s;
}

TEST(EvalSum, FixedSmallValues) {
  const auto s9 = eval_sum(SumSpec(FactoredInteger::parse("3^2"), 8, BigInt(1), BigInt(0), BigInt(0)));
  EXPECT_LE(s9.value.abs(), 1e-12);
  EXPECT_EQ(s9.terms_counted, 6u);
  EXPECT_EQ(s9.skipped, 2u);
  const auto s4 = eval_sum(SumSpec(FactoredInteger::parse("2^2"), 2, BigInt(1), BigInt(1), BigInt(0)));
  EXPECT_NEAR(s4.value.re, -1.0, 1e-12);
  EXPECT_NEAR(s4.value.im, 0.0, 1e-12);
}

TEST(EvalSum, CompletePeriodOfKloostermanSumIsReal) {
  // S(a, b; q) over a full period is real because n -> -n swaps the phase sign.
  const auto q = FactoredInteger::parse("5^3*7");
  const auto r = eval_sum(SumSpec(q, 875, BigInt(3), BigInt(11), BigInt(0)));
  EXPECT_NEAR(r.value.im, 0.0, 1e-9);
  EXPECT_EQ(r.terms_counted, 100u * 6u);
}

TEST(EvalSum, AgreesWithNaivePathOnRandomSpecs) {
  Rng rng(2024);
  const std::vector<std::string> moduli = {"2^10", "3^7", "2^4*3^4", "5^5*7^2", "11^3", "2^20*3^12", "3^50", "2^70*5^3"};
  for (int i = 0; i < 100; ++i) {
    const auto q = FactoredInteger::parse(moduli[rng.below(moduli.size())]);
    BigInt a;
    do a = rng.big_below(q.value()); while (gcd(a, q.value()) != 1);
    const BigInt b = rng.big_below(q.value());
    const BigInt c = rng.big_below(q.value()) - (q.value() >> 1);
    const std::uint64_t N = rng.between(1, 3000);
    const SumSpec spec(q, N, a, b, c);
    const auto got = eval_sum(spec, {static_cast<unsigned>(rng.between(1, 4)), 53});
    const auto want = naive_sum(q, N, spec.a(), spec.b(), c);
    EXPECT_LE(std::abs(std::complex<long double>(got.value.re, got.value.im) - want), 1e-9)
        << q.to_string() << " N=" << N;
    EXPECT_LE(got.value.err, 1e-9);
  }
}

TEST(EvalSum, ReportedErrorCoversDeviation) {
  const auto q = FactoredInteger::parse("3^12");
  const SumSpec spec(q, 200000, BigInt(7), BigInt(5), BigInt(-1000));
  const auto got = eval_sum(spec);
  const auto want = naive_sum(q, spec.N(), spec.a(), spec.b(), spec.c());
  EXPECT_LE(std::abs(std::complex<long double>(got.value.re, got.value.im) - want), got.value.err);
}

TEST(EvalSum, BitIdenticalAcrossThreadCounts) {
  const auto q = FactoredInteger::parse("2^30*3^19");
  const SumSpec spec(q, 700000, BigInt(12347), BigInt(678), BigInt(99));
  const auto one = eval_sum(spec, {1, 53});
  for (unsigned t : {2u, 3u, 8u}) {
    const auto many = eval_sum(spec, {t, 53});
    EXPECT_EQ(format_double(one.value.re), format_double(many.value.re));
    EXPECT_EQ(format_double(one.value.im), format_double(many.value.im));
    EXPECT_EQ(one.value.err, many.value.err);
  }
}

TEST(EvalSum, ExtendedPrecisionAgrees) {
  const auto q = FactoredInteger::parse("7^9");
  const SumSpec spec(q, 50000, BigInt(3), BigInt(1), BigInt(0));
  const auto d = eval_sum(spec, {1, 53});
  const auto ld = eval_sum(spec, {1, 64});
  EXPECT_NEAR(d.value.re, ld.value.re, d.value.err + ld.value.err);
  EXPECT_LT(ld.value.err, d.value.err);
  EXPECT_THROW(eval_sum(spec, {1, 65}), std::invalid_argument);
}

TEST(SumSpec, ValidatesInputs) {
  const auto q = FactoredInteger::parse("3^4");
  EXPECT_THROW(SumSpec(q, 10, BigInt(3), BigInt(0), BigInt(0)), NotCoprime);
  EXPECT_THROW(SumSpec(q, 0, BigInt(1), BigInt(0), BigInt(0)), std::invalid_argument);
  EXPECT_THROW(SumSpec(FactoredInteger(), 5, BigInt(1), BigInt(0), BigInt(0)), std::invalid_argument);
  const SumSpec s(q, 10, BigInt(-1), BigInt(163), BigInt(-4));
  EXPECT_EQ(s.a(), BigInt(80));
  EXPECT_EQ(s.b(), BigInt(1));
  EXPECT_EQ(s.c(), BigInt(-4));
}

TEST(ShiftToKernel, ResultStartsOnKernelMultipleAndStaysClose) {
  Rng rng(9);
  for (int i = 0; i < 60; ++i) {
    const auto q = FactoredInteger::parse(i % 2 ? "2^8*3^5" : "5^6*7");
    const BigInt c = rng.big_below(q.value());
    const SumSpec spec(q, rng.between(10, 5000), BigInt(1), rng.big_below(q.value()), c);
    const auto shifted = shift_to_kernel(spec);
    const BigInt& d = spec.d().value();
    EXPECT_EQ(mod_floor(shifted.spec.c(), d), BigInt(0));
    EXPECT_LT(shifted.shift_amount, d);
    EXPECT_EQ(shifted.spec.N(), spec.N());
    const auto s = eval_sum(spec).value, s1 = eval_sum(shifted.spec).value;
    const double diff = std::hypot(s.re - s1.re, s.im - s1.im);
    EXPECT_LE(diff, 2.0 * shifted.shift_amount.get_d() + 1e-9);
  }
}

TEST(Scan, RowsAndCsv) {
  const auto q = FactoredInteger::parse("3^6");
  const std::vector<std::uint64_t> Ns = {10, 729};
  const auto rows = scan(q, BigInt(1), BigInt(0), BigInt(0), Ns);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].terms, 486u);
  EXPECT_FALSE(rows[0].thm1_applicable);
  const auto csv = scan_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), kScanCsvHeader);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

}  // namespace
}  // namespace kls
