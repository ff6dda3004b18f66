#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace svtgv {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape metadata inconsistent with data, mismatched shapes, non-finite samples.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// A parameter map or similar input violates its value constraints.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Solver or generator settings that cannot be honoured (step sizes, budgets).
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// An iterative procedure failed to converge within its budget.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed tensor file; carries the byte offset where decoding stopped.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace svtgv
