#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace cfb {

// Base class for everything thrown by this library. Catching cfb::Error is
// sufficient to separate library failures from std:: failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent user input: bad JSON, negative tolerances,
// kappa below the admissible threshold, non-increasing grids.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Mathematically inadmissible arguments: non-finite input, moments that do
// not exist for the requested operation, infeasible moment constraints.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Evaluation requested exactly at a pole.
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

// The object cannot deliver what was asked of it (derivative order above the
// declared maximum, kernel for a filter that has none).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

// A filter lacks the smoothness the derivative cascade needs and carries no
// one-sided jump data that could substitute for it.
class SmoothnessError : public Error {
 public:
  using Error::Error;
};

// A constructor's numerical admissibility work failed: divergent normalizing
// integral, degenerate window, support/smoothness preconditions violated.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature ran out of refinements. Carries the best estimate so
// callers can decide whether the partial answer is usable.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::complex<double> best,
                   double err)
      : Error(msg), best_estimate(best), error_estimate(err) {}
  std::complex<double> best_estimate;
  double error_estimate;
};

// A nominally real quantity came back with a significant imaginary part,
// which indicates a parity bug in a filter or evaluator, not roundoff.
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

// A computation would exceed its memory or iteration budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

// An exact-oracle audit found a bracket that excludes the true value by more
// than the reported quadrature error.
class AuditFailure : public Error {
 public:
  AuditFailure(const std::string& msg, double x, double violation)
      : Error(msg), offending_x(x), violation(violation) {}
  double offending_x;
  double violation;
};

}  // namespace cfb
