#pragma once

#include <stdexcept>
#include <string>

namespace friable {

// Bad argument or violated precondition (limit below 2, j out of range, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input lies outside the range where an explicit estimate is proven
// (theta bounds below 1427, w(alpha,t) at alpha <= 1/2, z <= 1, ...).
class ValidityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A non-finite integrand value; carries the abscissa.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double t)
      : std::runtime_error(what + " at t=" + std::to_string(t)), t_(t) {}
  double where() const noexcept { return t_; }

 private:
  double t_;
};

// Root finder or solver could not bracket/converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace friable
