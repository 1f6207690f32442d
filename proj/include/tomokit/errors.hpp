#pragma once

#include <stdexcept>
#include <string>

namespace tomokit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidGridError : public Error {
 public:
  using Error::Error;
};

class InvalidStateError : public Error {
 public:
  using Error::Error;
};

/// Covariance matrix not positive definite.
class CovarianceError : public Error {
 public:
  using Error::Error;
};

/// Grid does not contain enough of the state's support.
class GridTooSmallError : public Error {
 public:
  using Error::Error;
};

class NotMinimumUncertaintyError : public Error {
 public:
  using Error::Error;
};

/// A shift or shear moved probability mass outside the sampled grid.
class SupportLeavesGridError : public Error {
 public:
  using Error::Error;
};

class DegenerateRayError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplingError : public Error {
 public:
  using Error::Error;
};

class MissingRayError : public Error {
 public:
  using Error::Error;
};

class UnreachableRayError : public Error {
 public:
  using Error::Error;
};

class TailTruncationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tomokit
