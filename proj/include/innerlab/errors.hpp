#pragma once

#include <stdexcept>
#include <string>

namespace innerlab {

/// Base class for all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (exit code 2).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A node/sample/depth budget was exhausted (exit code 3).
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, long partial_depth = -1)
      : Error(what), partial_depth_(partial_depth) {}
  long partial_depth() const noexcept { return partial_depth_; }

 private:
  long partial_depth_;
};

/// Iterative numerics failed to converge or a consistency check failed (exit code 4).
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text or mixed geometric models.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace innerlab
