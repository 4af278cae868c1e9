#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Argument outside the mathematical domain of a function (pole, s <= 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An adaptive integration did not reach its tolerance within the node budget.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A FracKernel was evaluated before its constant alpha was fixed.
class CalibrationMissingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The two calibration routes for alpha disagree beyond tolerance.
class CalibrationInconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Test function is not smooth enough for the principal-value formula (needs alpha > 2 gamma).
class SmoothnessError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Grid refinement changed a spectral result by more than the allowed amount.
class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A hyperboloid point violates [x,x] = 1, x0 > 0.
class InvalidPointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Radial heat solver lost too much mass through the absorbing boundary.
class MassLeakError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed profile expression or descriptor.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace fraclap
