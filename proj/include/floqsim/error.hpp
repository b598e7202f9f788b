#pragma once

#include <stdexcept>
#include <string>

namespace floqsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes or site indices that do not fit the chain.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Parameters outside the supported domain (negative frequency, d = 4, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical contract was violated: non-Hermitian input, norm drift,
/// eigenphase too close to the branch cut, non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Result changed by more than the tolerance when the step was halved.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid experiment configuration; `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& what)
      : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace floqsim
