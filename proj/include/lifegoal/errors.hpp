#pragma once

#include <stdexcept>
#include <string>

namespace lifegoal {

// Parameters outside the documented domain (negative rates, D >= f, ...).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Parameters are individually valid but the scenario violates a
// feasibility restriction (premium too expensive, threshold ordering).
class InfeasibleScenario : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Continuous-premium annuity over an empty payment period.
class DegenerateAnnuity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ConvergenceError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace lifegoal
