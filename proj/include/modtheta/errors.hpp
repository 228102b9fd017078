#pragma once

#include <stdexcept>
#include <string>

namespace modtheta {

/// Base class of every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition of an operation was violated. The message starts with the
/// name of the violated precondition, e.g. "dominant: (0,1) is not dominant".
class DomainError : public Error {
 public:
  DomainError(const std::string& precondition, const std::string& detail)
      : Error(precondition + ": " + detail), precondition_(precondition) {}

  const std::string& precondition() const noexcept { return precondition_; }

 private:
  std::string precondition_;
};

/// Vector lengths disagree.
class DimensionError : public DomainError {
 public:
  explicit DimensionError(const std::string& detail)
      : DomainError("dimension", detail) {}
};

/// Malformed external input (JSON documents, command-line values).
class ParseError : public DomainError {
 public:
  explicit ParseError(const std::string& detail) : DomainError("parse", detail) {}
};

/// A configured size bound or integer range was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

}  // namespace modtheta
