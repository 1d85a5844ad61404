#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pdkernel {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument or constructed value violates a documented invariant.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent configuration / input file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Truncation would discard the dominant nearest-neighbour term.
class DegenerateKernelError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Base for failures of the numerics themselves (singular solves, NaN, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularSystemError : public NumericalError {
 public:
  SingularSystemError(double xi, const std::string& what)
      : NumericalError(what), xi_(xi) {}
  double xi() const noexcept { return xi_; }

 private:
  double xi_;
};

/// Fourier coefficients of a transfer function that should be real are not.
class DerivationInconsistencyError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Quadrature did not converge under grid doubling.
class ResolutionError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NonFiniteStateError : public NumericalError {
 public:
  NonFiniteStateError(std::size_t step, const std::string& what)
      : NumericalError(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace pdkernel
