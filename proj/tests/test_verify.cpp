#include <gtest/gtest.h>

#include "kls/verify.hpp"

namespace kls {
namespace {

class SuiteSmoke : public ::testing::TestWithParam<std::string> {};

TEST_P(SuiteSmoke, ReducedRunPasses) {
  SuiteConfig config;
  config.seed = 3;
  config.cases = 15;
  const auto rep = run_suite(GetParam(), config);
  EXPECT_TRUE(rep.passed()) << rep.suite << " worst " << rep.worst_margin;
  EXPECT_EQ(rep.suite, GetParam());
}

INSTANTIATE_TEST_SUITE_P(AllSuites, SuiteSmoke, ::testing::ValuesIn(suite_names()),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

TEST(Suites, SameSeedSameReport) {
  SuiteConfig config;
  config.seed = 42;
  config.cases = 20;
  const auto a = run_suite("w-identity", config);
  const auto b = run_suite("w-identity", config);
  ASSERT_EQ(a.w_rows.size(), b.w_rows.size());
  for (std::size_t i = 0; i < a.w_rows.size(); ++i) {
    EXPECT_EQ(a.w_rows[i].q, b.w_rows[i].q);
    EXPECT_EQ(a.w_rows[i].abs_diff, b.w_rows[i].abs_diff);
  }
}

TEST(Suites, UnknownNameThrows) { EXPECT_THROW(run_suite("nosuch", {}), std::invalid_argument); }

TEST(RandomModulus, PowerfulAndBelowLimit) {
  Rng rng(6);
  const BigInt limit("1000000000000");
  for (int i = 0; i < 300; ++i) {
    const auto q = random_powerful_modulus(rng, limit);
    EXPECT_LE(q.value(), limit);
    for (const auto& pp : q.factors()) EXPECT_GE(pp.exponent, 2u);
    const BigInt u = random_unit(rng, q);
    EXPECT_EQ(gcd(u, q.value()), BigInt(1));
  }
}

}  // namespace
}  // namespace kls
