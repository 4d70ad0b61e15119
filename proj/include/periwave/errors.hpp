#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace periwave {

// Root of the library error hierarchy. Subtypes map 1:1 to the failure modes
// the solver can report; catching Error covers all of them.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidParameter : public Error {
 public:
  explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

class OutOfDomain : public Error {
 public:
  explicit OutOfDomain(const std::string& msg) : Error(msg) {}
};

// System matrix too close to singular at the given spectral parameter.
class NearPoleError : public Error {
 public:
  NearPoleError(const std::string& msg, std::complex<double> z, double indicator)
      : Error(msg), z(z), indicator(indicator) {}
  std::complex<double> z;
  double indicator;
};

// A stationary crossing (|slope| <= slope_tol) or merged right/left crossings.
class AssumptionViolated : public Error {
 public:
  explicit AssumptionViolated(const std::string& msg) : Error(msg) {}
};

class ContourConstructionError : public Error {
 public:
  explicit ContourConstructionError(const std::string& msg) : Error(msg) {}
};

// Factorization or eigensolver breakdown, residual beyond tolerance.
class NumericalFailure : public Error {
 public:
  explicit NumericalFailure(const std::string& msg) : Error(msg) {}
};

// Half-guide source recovery failed across the whole regularization sweep.
class RecoveryFailure : public Error {
 public:
  explicit RecoveryFailure(const std::string& msg) : Error(msg) {}
};

}  // namespace periwave
