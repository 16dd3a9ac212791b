#pragma once

#include <stdexcept>
#include <string>

namespace rlcert {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A caller violated an operation precondition (bad action index, stepping a
/// finished episode, calling an operation on the wrong kind of object, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Invalid numeric input (NaN observation, out-of-domain probability, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A file, snapshot payload, or config document does not parse or has the
/// wrong shape. The message names the offending location/field.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// A hard cap (cell count, enumeration size) would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not defined for this object.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not reach its tolerance within the iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Run configuration rejected during validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace rlcert
