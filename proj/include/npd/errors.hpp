#pragma once

#include <stdexcept>
#include <string>

namespace npd {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Caller passed inconsistent arguments or an invalid configuration.
// CLI maps this to exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A file could not be read, parsed, or validated. CLI exit code 2.
class DataError : public Error {
 public:
  using Error::Error;
};

// Wire/file format violation (bad magic, truncation, version mismatch).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// A computation produced NaN/Inf or an otherwise unusable numerical
// state. CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Raw 4-vector whose normal part is too small to define a plane.
class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

// Neighborhood whose covariance cannot pin down a single normal
// direction (collinear or coincident points).
class DegenerateFitError : public Error {
 public:
  DegenerateFitError(const std::string& msg, std::size_t point_index)
      : Error(msg), index(point_index) {}
  std::size_t index;
};

}  // namespace npd
