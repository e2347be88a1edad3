#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace inrr {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated by the caller.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// A computation left the representable range (overflow, NaN).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A linear system could not be solved.
class SolverError : public NumericError {
 public:
  SolverError(const std::string& what, double condition_estimate)
      : NumericError(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

/// Malformed input file. Carries the byte offset where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace inrr
