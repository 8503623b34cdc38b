#pragma once

#include <stdexcept>
#include <string>

namespace ctxgeom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad dimension, index, parameter).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or a post-check failed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxgeom
