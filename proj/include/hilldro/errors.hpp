#pragma once

#include <stdexcept>
#include <string>

namespace hilldro {

// Argument outside the mathematical domain of a function (m >= 1, NaN, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Evaluation too close to the origin, where the Keplerian term blows up.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step-size underflow, step budget exhausted, or a failed right-hand side.
class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative procedure (differential corrector) did not reach its target.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hilldro
