#pragma once

#include <stdexcept>
#include <string>

namespace ringlab {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid arguments or violated preconditions.
class DomainError : public Error {
public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

// An iterative method exceeded its iteration budget.
class ConvergenceError : public Error {
public:
  ConvergenceError(const std::string& msg, long iterations)
      : Error(msg), iterations(iterations) {}
  long iterations;
};

// The state left the representable range (NaN/Inf) during integration.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& msg, double t) : Error(msg), t(t) {}
  double t;
};

// Step size underflow: the controller could not meet the tolerance.
class StiffnessError : public Error {
public:
  StiffnessError(const std::string& msg, double t, double h)
      : Error(msg), t(t), h(h) {}
  double t;
  double h;
};

// A signal expected to oscillate did not (too few mean crossings).
class NotPeriodicError : public Error {
public:
  explicit NotPeriodicError(const std::string& msg) : Error(msg) {}
};

// All eigenvalues vanished within tolerance; no ratio can be formed.
class DegenerateSpectrumError : public Error {
public:
  explicit DegenerateSpectrumError(const std::string& msg) : Error(msg) {}
};

// The kinetic matrix has more than one stationary distribution.
class NonUniqueEquilibriumError : public Error {
public:
  NonUniqueEquilibriumError(const std::string& msg, int null_dimension)
      : Error(msg), null_dimension(null_dimension) {}
  int null_dimension;
};

// The requested quantity is not defined for this topology.
class UnsupportedTopologyError : public Error {
public:
  explicit UnsupportedTopologyError(const std::string& msg) : Error(msg) {}
};

}  // namespace ringlab
