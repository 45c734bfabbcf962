#pragma once

#include <stdexcept>
#include <string>

namespace radsum {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments (b < 1, d < 2, malformed rational, ...).
class InputError : public Error {
  public:
    using Error::Error;
};

// An operation needs a tighter input enclosure than it was given.
class PrecisionError : public Error {
  public:
    using Error::Error;
};

// Parameters are well formed but admit no construction (e.g. N below N_min).
class InfeasibleError : public Error {
  public:
    using Error::Error;
};

// An exhaustive scan would exceed its configured budget.
class BudgetError : public Error {
  public:
    BudgetError(const std::string& what, long double estimated_cost)
        : Error(what), estimated_cost_(estimated_cost) {}
    long double estimated_cost() const { return estimated_cost_; }

  private:
    long double estimated_cost_;
};

}  // namespace radsum
