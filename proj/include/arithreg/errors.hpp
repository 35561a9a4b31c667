#pragma once

#include <stdexcept>
#include <string>

namespace arithreg {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed group specs, element strings, files.
class InvalidSpecError : public Error {
 public:
  using Error::Error;
};

/// Arguments that do not belong together (mismatched groups, bad k, even N where odd is needed).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its stated precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A size or work budget was exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Randomized search exhausted its retries.
class RetryError : public ResourceError {
 public:
  using ResourceError::ResourceError;
};

/// A guaranteed property failed at run time.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace arithreg
