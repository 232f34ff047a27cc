#pragma once

#include <stdexcept>
#include <string>

namespace celldim {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Scenario failed its invariants (also used for malformed scenario files).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The SNR threshold sequence of a class is not strictly decreasing,
// i.e. I*beta_min/P_gamma >= beta_{k,l_k-1}. The scenario is inconsistent
// (beta_min too high for the class rate) and must be rejected.
class NonMonotoneThresholds : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature could not reach the requested tolerance.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

// Root bracketing failed: the predicate/function does not change over the
// supplied bracket.
class BracketError : public Error {
 public:
  using Error::Error;
};

// The demand functional is degenerate (M2 = 0, hence sigma = 0); the
// normalized quantities of the Gaussian/Edgeworth machinery do not exist.
class DegenerateFunctional : public Error {
 public:
  using Error::Error;
};

// The exact pmf support would exceed the configured memory budget.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// A certified dimensioning equation has no solution (the error term alone
// already exceeds the target loss probability).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace celldim
