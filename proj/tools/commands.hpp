#pragma once

#include <iosfwd>

#include "kls/verify.hpp"

namespace kls::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBudget = 3;

/// 0 when the suite had no failures, kExitVerifyFailed otherwise.
int verify_exit_code(const SuiteReport& report);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kls::cli
