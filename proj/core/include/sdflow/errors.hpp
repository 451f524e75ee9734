#pragma once

#include <stdexcept>
#include <string>

namespace sdflow {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or shape violation in a call.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Height field leaves the admissible set (surface too close to the axis).
class AdmissibilityError : public Error {
 public:
  AdmissibilityError(const std::string& what, double min_clearance)
      : Error(what), min_clearance_(min_clearance) {}
  double min_clearance() const noexcept { return min_clearance_; }

 private:
  double min_clearance_;
};

/// Non-finite values produced during operator evaluation.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure did not converge within its budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations)
      : Error(what), iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

}  // namespace sdflow
