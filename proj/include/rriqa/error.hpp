#pragma once

#include <stdexcept>
#include <string>

namespace rriqa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Caller broke a precondition (wrong color space, mismatched dimensions, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration, e.g. an image too small for the requested pyramid.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterative procedure did not converge within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Parameter estimation impossible on the given data.
class EstimationError : public Error {
 public:
  using Error::Error;
};

/// Malformed image container or feature stream.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Dataset manifest problems.
class IngestionError : public Error {
 public:
  using Error::Error;
};

/// Constant inputs where a correlation or a regression needs spread.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace rriqa
