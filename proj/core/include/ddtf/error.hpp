#pragma once

#include <stdexcept>
#include <string>

namespace ddtf {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (shape, range, size guard).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Malformed file contents.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// PGM with maxval > 255.
class UnsupportedDepthError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A matrix that must have full column rank does not. `ratio()` is the
/// offending sigma_min / sigma_max (0 when the matrix is identically zero).
class DegenerateRankError : public Error {
 public:
  DegenerateRankError(const std::string& what, double ratio);
  double ratio() const noexcept { return ratio_; }

 private:
  double ratio_;
};

}  // namespace ddtf
