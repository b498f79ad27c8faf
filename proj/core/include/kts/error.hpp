#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kts {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched dimensions, empty samples, non-square matrices.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Out-of-domain scalar arguments (lengthscale, alpha, delta, counts).
class ParameterError : public Error {
 public:
  using Error::Error;
};

class InsufficientSamplesError : public Error {
 public:
  using Error::Error;
};

// The paired U-statistic estimator needs nX == nY.
class PairingError : public Error {
 public:
  using Error::Error;
};

class DistributionError : public Error {
 public:
  using Error::Error;
};

class EnumerationTooLargeError : public Error {
 public:
  using Error::Error;
};

class IncompleteTableError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace kts
