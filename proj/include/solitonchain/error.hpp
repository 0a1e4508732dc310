#pragma once

#include <stdexcept>
#include <string>

namespace solitonchain {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument: bad physical parameter, index out of range, basis mismatch.
class ParameterError : public Error {
  public:
    using Error::Error;
};

/// An operation would leave the truncated excitation subspace.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Eigensolver failure or a non-finite intermediate.
class NumericalError : public Error {
  public:
    using Error::Error;
};

/// A density matrix that is not Hermitian, unit-trace and PSD within tolerance.
class DomainError : public Error {
  public:
    using Error::Error;
};

} // namespace solitonchain
