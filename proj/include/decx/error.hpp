#pragma once

#include <stdexcept>
#include <string>

namespace decx {

// Exit codes used by the CLI; each exception type maps onto one.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 2,
  kSolver = 3,
  kRigorousViolation = 4,
};

/// Malformed input: bad dimensions, probabilities off the simplex, bad
/// parameters.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what)
      : std::invalid_argument(what) {}
};

/// A numerical routine failed to reach its certificate within budget.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double achieved_gap)
      : std::runtime_error(what), achieved_gap_(achieved_gap) {}

  double achieved_gap() const { return achieved_gap_; }

 private:
  double achieved_gap_;
};

}  // namespace decx
