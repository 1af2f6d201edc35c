#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kls {

/// An enumeration or evaluation would exceed the configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double estimated_cost, double budget)
      : std::runtime_error(what), estimated_cost_(estimated_cost), budget_(budget) {}
  double estimated_cost() const { return estimated_cost_; }
  double budget() const { return budget_; }

 private:
  double estimated_cost_;
  double budget_;
};

/// q does not divide q_eps^(m+1). Unreachable unless the construction is broken.
class DivisibilityFailure : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DeltaOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

}  // namespace kls
