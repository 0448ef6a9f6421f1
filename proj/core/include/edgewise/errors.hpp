#pragma once

#include <stdexcept>
#include <string>

namespace edgewise {

/// Base of everything thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a value that violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An internal contract between components was broken.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An identifier could not be resolved (node id, parameter name, ...).
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Input files are malformed or inconsistent.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numeric computation produced non-finite or otherwise unusable values.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace edgewise
