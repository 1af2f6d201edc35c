#include <gtest/gtest.h>

#include <cmath>

#include "kls/rng.hpp"
#include "kls/weyl.hpp"

namespace kls {
namespace {

TEST(DistToInt, ExactRational) {
  EXPECT_EQ(dist_to_int(Rational(7, 3)), Rational(1, 3));
  EXPECT_EQ(dist_to_int(Rational(-7, 3)), Rational(1, 3));
  EXPECT_EQ(dist_to_int(Rational(5, 2)), Rational(1, 2));
  EXPECT_EQ(dist_to_int(Rational(4)), Rational(0));
  EXPECT_DOUBLE_EQ(dist_to_int(0.9), 0.09999999999999998);
}

TEST(GeometricSum, BoundHoldsAndIsTightAtIntegers) {
  const auto at_zero = geometric_sum_check(Rational(3), 50);
  EXPECT_DOUBLE_EQ(at_zero.bound, 50.0);
  EXPECT_NEAR(at_zero.sum.re, 50.0, 1e-12);
  EXPECT_TRUE(at_zero.holds);
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const Rational alpha(static_cast<long>(rng.below(1000)), static_cast<long>(rng.between(1, 997)));
    const auto c = geometric_sum_check(alpha, rng.between(1, 2000));
    EXPECT_TRUE(c.holds) << alpha.to_string();
  }
}

TEST(RationalApprox, ConvergentsOfGoldenRatioAreFibonacci) {
  const auto r = rational_approx(Rational(BigInt("1618033988749894848"), BigInt("1000000000000000000")), BigInt(100));
  EXPECT_EQ(r.A, BigInt(144));
  EXPECT_EQ(r.Q, BigInt(89));
  EXPECT_LE(std::fabs(r.theta), 1.0);
}

TEST(RationalApprox, ThetaBoundedAndCoprime) {
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const Rational alpha(BigInt(static_cast<long>(rng.below(1u << 30))), BigInt(static_cast<long>(rng.between(1, 1u << 30))));
    const BigInt Qmax(static_cast<long>(rng.between(1, 100000)));
    const auto r = rational_approx(alpha, Qmax);
    EXPECT_LE(r.Q, Qmax);
    EXPECT_GE(r.Q, 1);
    EXPECT_EQ(gcd(r.A, r.Q), BigInt(1));
    EXPECT_EQ(r.theta_exact, (alpha - Rational(r.A, r.Q)) * Rational(r.Q * r.Q, BigInt(1)));
    EXPECT_LE(std::fabs(r.theta_exact.to_double()), 1.0);
  }
  const auto pi = rational_approx(3.141592653589793, BigInt(200));
  EXPECT_EQ(pi.A, BigInt(355));
  EXPECT_EQ(pi.Q, BigInt(113));
}

TEST(Lemma3, RightHandSideValue) {
  const Rational alpha(1, 3);
  const auto approx = rational_approx(alpha, BigInt(3));
  ASSERT_EQ(approx.Q, BigInt(3));
  const auto c = lemma3_check(alpha, Rational(1, 7), 100.0, 3, approx);
  EXPECT_NEAR(c.rhs, 1239.5500423920519, 1e-9);
  EXPECT_TRUE(c.holds);
}

TEST(Lemma3, LhsMatchesDirectSum) {
  const Rational alpha(5, 17), beta(1, 4);
  const auto approx = rational_approx(alpha, BigInt(17));
  const auto c = lemma3_check(alpha, beta, 40.0, 100, approx);
  double lhs = 0;
  for (int n = 1; n <= 100; ++n) {
    const Rational d = dist_to_int(alpha * Rational(n) + beta);
    lhs += d == Rational(0) ? 40.0 : std::min(40.0, 1.0 / d.to_double());
  }
  EXPECT_NEAR(c.lhs, lhs, 1e-9);
}

TEST(Lemma3, RandomTrialsHold) {
  Rng rng(99);
  for (int i = 0; i < 2000; ++i) {
    const auto Qmax = BigInt(static_cast<long>(rng.between(1, 5000)));
    const Rational alpha(BigInt(static_cast<long>(rng.below(1000003))), BigInt(1000003));
    const Rational beta(BigInt(static_cast<long>(rng.below(65536))), BigInt(65536));
    const auto approx = rational_approx(alpha, Qmax);
    const auto c = lemma3_check(alpha, beta, 1.0 + 1000.0 * rng.unit(), rng.between(1, 3000), approx);
    EXPECT_TRUE(c.holds);
  }
}

TEST(Damping, LogFormMatchesProductForm) {
  for (double Q : {2.0, 81.0, 1e6, 3e12})
    for (double L : {1.0, 10.0, 5e5, 1e9}) {
      const double a = damping_delta(std::log(1e20), std::log(Q), std::log(L));
      const double b = damping_delta_product_form(std::log(1e20), Q, L);
      EXPECT_NEAR(a / b, 1.0, 1e-12);
    }
  EXPECT_TRUE(std::isinf(damping_delta(1e6, 2000.0, 1.0)));
}

TEST(Damping, FactorIsCappedAtOne) {
  const auto q = FactoredInteger::parse("3^20");
  const auto small = damping_factor(q, FactoredInteger::parse("3"), BigInt(2), 2);
  EXPECT_DOUBLE_EQ(small.Delta, 1.0);
  EXPECT_GT(small.delta, 1.0);
  const auto big = damping_factor(q, FactoredInteger::parse("3^18"), BigInt(1) << 30, 2);
  EXPECT_LT(big.Delta, 1.0);
  EXPECT_DOUBLE_EQ(big.Delta, big.delta);
}

TEST(VSum, MatchesDirectLoop) {
  for (const Rational& alpha : {Rational(3, 101), Rational(1, 2), Rational(7, 1000003)}) {
    const std::uint64_t L = 300;
    double direct = 0;
    for (long mu = -static_cast<long>(L) + 1; mu < static_cast<long>(L); ++mu) {
      const Rational d = dist_to_int(alpha * Rational(mu));
      direct += d == Rational(0) ? 2.0 * L : std::min(2.0 * L, 1.0 / d.to_double());
    }
    EXPECT_NEAR(v_sum(alpha, L), direct, 1e-9 * direct);
    EXPECT_EQ(v_sum(alpha, L, 1), v_sum(alpha, L, 3));
  }
}

}  // namespace
}  // namespace kls
