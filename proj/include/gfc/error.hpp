#pragma once

#include <stdexcept>
#include <string>

namespace gfc {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain where the operation is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not reach its requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

class QuadratureError : public AccuracyError {
 public:
  using AccuracyError::AccuracyError;
};

class DerivativeError : public AccuracyError {
 public:
  using AccuracyError::AccuracyError;
};

/// The composition kernel of two kernels is not finite on the sampled triangle.
class RelationViolated : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gfc
