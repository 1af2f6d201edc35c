#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"

namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string(KLS_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(Cli, EvalJson) {
  const auto r = run("eval --q 3^2 --N 8");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"terms_counted\":6"), std::string::npos) << r.out;
}

TEST(Cli, EvalRejectsNonCoprimeA) { EXPECT_EQ(run("eval --q 3^4 --N 10 --a 3").code, 2); }

TEST(Cli, EvalOutputIndependentOfThreads) {
  const auto one = run("--threads 1 eval --q 2^40*3^5 --N 300000 --a 5 --b 9");
  const auto four = run("--threads 4 eval --q 2^40*3^5 --N 300000 --a 5 --b 9");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

TEST(Cli, ScanDefaultsToCsv) {
  const auto r = run("scan --q 3^6 --N 10,100");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("N,re,im,abs,terms,trivial,thm1_bound,thm1_applicable,ratio\n", 0), 0u) << r.out;
  const auto j = run("--format json scan --q 3^6 --N 10");
  EXPECT_EQ(j.out.front(), '[');
}

TEST(Cli, JcountValue) {
  const auto r = run("jcount --k 2 --m 2 --P 3 --lambda 1,3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "{\"k\":2,\"m\":2,\"P\":3,\"lambda\":[1,3],\"count\":8}\n");
}

TEST(Cli, JcountOverBudgetExitsThree) { EXPECT_EQ(run("jcount --k 8 --m 4 --P 50").code, 3); }

TEST(Cli, UnknownSuiteExitsTwo) { EXPECT_EQ(run("verify nosuch").code, 2); }

TEST(Cli, VerifyOverBudgetExitsThree) { EXPECT_EQ(run("--budget 5 verify lemma4").code, 3); }

TEST(Cli, FailedSuiteMapsToExitOne) {
  kls::SuiteReport report;
  report.suite = "lemma1";
  report.cases = 10;
  EXPECT_EQ(kls::cli::verify_exit_code(report), kls::cli::kExitOk);
  report.failures = 1;
  EXPECT_EQ(kls::cli::verify_exit_code(report), kls::cli::kExitVerifyFailed);
}

TEST(Cli, InProcessRunMatchesBinary) {
  std::ostringstream out, err;
  const char* argv[] = {"kls", "jcount", "--k", "2", "--m", "2", "--P", "2"};
  EXPECT_EQ(kls::cli::run(8, argv, out, err), kls::cli::kExitOk);
  EXPECT_EQ(out.str(), run("jcount --k 2 --m 2 --P 2").out);
}

TEST(Cli, BadPrecisionAndModulusExitTwo) {
  EXPECT_EQ(run("--precision 0 eval --q 9 --N 3").code, 2);
  EXPECT_EQ(run("eval --q 2^x --N 3").code, 2);
  EXPECT_EQ(run("--format xml eval --q 9 --N 3").code, 2);
}

TEST(Cli, MissingSubcommandExitsTwo) { EXPECT_EQ(run("").code, 2); }

TEST(Cli, VerifyPassesAndIsDeterministic) {
  const auto a = run("verify lemma1 --cases 50 --seed 5");
  const auto b = run("--seed 5 verify lemma1 --cases 50");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("\"failures\":0"), std::string::npos);
}

TEST(Cli, BoundFields) {
  const auto r = run("bound --q 3^40 --N 1000");
  EXPECT_EQ(r.code, 0);
  for (const char* key : {"\"q\"", "\"N\"", "\"gamma\"", "\"bound\"", "\"applicable\":false", "\"failed_conditions\""})
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  EXPECT_EQ(run("bound --q 3^40 --N 1000 --delta 0.5").code, 2);
}

TEST(Cli, LargeIntegersAreStrings) {
  const auto r = run("bound --q 3^100 --N 100000000000000000000");
  EXPECT_NE(r.out.find("\"N\":\"100000000000000000000\""), std::string::npos) << r.out;
}

TEST(Cli, RegimeSymbolic) {
  const auto r = run("regime --ln-q 8e9");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\"window_nonempty\":true"), std::string::npos) << r.out;
}

TEST(Cli, OutFileAndEnvironment) {
  const std::string path = ::testing::TempDir() + "kls_cli_out.json";
  EXPECT_EQ(run("--out " + path + " eval --q 2^2 --N 2 --a 1 --b 1").code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_NE(ss.str().find("\"re\":-1.0"), std::string::npos) << ss.str();
  const auto csv = run("eval --q 2^2 --N 2 --a 1 --b 1 && KLS_FORMAT=csv " + std::string(KLS_CLI_PATH) +
                       " eval --q 2^2 --N 2 --a 1 --b 1");
  EXPECT_NE(csv.out.find("q,N,a,b,c,re"), std::string::npos);
}

}  // namespace
