#pragma once

#include <stdexcept>

namespace qae {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument value or inconsistent shapes.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Qubit or element index out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Problem size exceeds what the dense kernels are built for.
class CapacityError : public ArgumentError {
 public:
  using ArgumentError::ArgumentError;
};

/// Malformed input file; message carries the line number where known.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: non-finite values, non-convergence, lost normalization.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Trash-qubit projection has (near-)zero probability; no state to renormalize.
class DegenerateProjectionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Run-bundle files missing or structurally incompatible for comparison.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure while reading or writing run artifacts.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qae
