#pragma once

#include <stdexcept>
#include <string>

namespace varistore {

/// Base class for every error raised by the library. The CLI maps the
/// subclasses onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition or configuration violation.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Unreadable, malformed or unwritable file.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Non-finite iterate, stability violation, or a quantity that cannot be
/// evaluated for the requested model.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, int iteration = -1)
      : Error(what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

}  // namespace varistore
