#pragma once

#include <stdexcept>
#include <string>

namespace odg {

/// Base class for all errors raised by the library. The CLI maps the
/// concrete subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point outside the parametric domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Requested derivative order exceeds the spline degree.
class DegreeError : public Error {
 public:
  using Error::Error;
};

/// Malformed input, bad options, missing exact solution.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Singular or inverted geometry map.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent interface or boundary data.
class TopologyError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace odg
