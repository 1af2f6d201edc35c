#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "kls/complex_estimate.hpp"

namespace kls {
namespace {

TEST(UnitPhase, QuarterTurns) {
  const auto i = unit_phase(1, 4);
  EXPECT_NEAR(i.re, 0.0, 1e-16);
  EXPECT_NEAR(i.im, 1.0, 1e-16);
  const auto minus_one = unit_phase(2, 4);
  EXPECT_DOUBLE_EQ(minus_one.re, -1.0);
  EXPECT_LE(i.err, 1e-13);
}

TEST(UnitPhase, ErrorBoundCoversTrueValue) {
  for (std::uint64_t q : {7ULL, 1000003ULL, (1ULL << 61) - 1}) {
    for (std::uint64_t r = 1; r < 200; r += 7) {
      const auto z = unit_phase(r, q);
      const long double t = 2.0L * std::numbers::pi_v<long double> * r / q;
      EXPECT_LE(std::fabs(z.re - std::cos(t)), z.err);
      EXPECT_LE(std::fabs(z.im - std::sin(t)), z.err);
    }
  }
}

TEST(EQ, ReducesBeforeConverting) {
  const BigInt q = BigInt(1) << 200;
  const BigInt v = q * 12345 + (q >> 2);
  const auto z = e_q(v, q);
  EXPECT_NEAR(z.re, 0.0, 1e-15);
  EXPECT_NEAR(z.im, 1.0, 1e-15);
  const auto w = e_q(BigInt(-1), BigInt(4));
  EXPECT_NEAR(w.im, -1.0, 1e-15);
}

TEST(EFrac, MatchesEQ) {
  const auto a = e_frac(Rational(5, 12));
  const auto b = e_q(BigInt(5), BigInt(12));
  EXPECT_NEAR(a.re, b.re, 1e-15);
  EXPECT_NEAR(a.im, b.im, 1e-15);
}

TEST(TermError, PrecisionRange) {
  EXPECT_GT(term_error(53), term_error(64));
  EXPECT_THROW(term_error(0), std::invalid_argument);
  EXPECT_THROW(term_error(65), std::invalid_argument);
}

TEST(SumAccumulator, CompensationRecoversSmallTerms) {
  SumAccumulator acc;
  acc.add(1e16, 0.0);
  for (int i = 0; i < 1000; ++i) acc.add(1.0, 0.0);
  acc.add(-1e16, 0.0);
  EXPECT_DOUBLE_EQ(acc.result().re, 1000.0);
  EXPECT_EQ(acc.terms(), 1002u);
}

TEST(SumAccumulator, MergeAddsErrors) {
  SumAccumulator a, b;
  a.add(ComplexEstimate{1.0, 2.0, 0.0});
  a.charge_term_error(1e-15);
  b.add(ComplexEstimate{3.0, -1.0, 0.0});
  b.charge_term_error(2e-15);
  a.merge(b);
  const auto r = a.result();
  EXPECT_DOUBLE_EQ(r.re, 4.0);
  EXPECT_DOUBLE_EQ(r.im, 1.0);
  EXPECT_GE(r.err, 3e-15);
}

TEST(ComplexEstimateOps, ProductErrorGrows) {
  const ComplexEstimate a{0.6, 0.8, 1e-16}, b{0.0, 1.0, 1e-16};
  const auto p = a * b;
  EXPECT_NEAR(p.re, -0.8, 1e-16);
  EXPECT_NEAR(p.im, 0.6, 1e-16);
  EXPECT_GE(p.err, 2e-16);
  EXPECT_NEAR((a + b).abs(), std::hypot(0.6, 1.8), 1e-15);
}

}  // namespace
}  // namespace kls
