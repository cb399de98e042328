#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cds {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape or modulus disagreement between matrices.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Malformed instance or scheme text. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line), detail_(what) {}

  /// Same error attributed to a file: "path:line: what".
  ParseError(const std::string& source, const ParseError& e)
      : Error(source + ":" + std::to_string(e.line_) + ": " + e.detail_), line_(e.line_), detail_(e.detail_) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// A structural requirement of the instance is violated (degenerate
/// instance, unknown vertex, bad block, ...).
class InstanceError : public Error {
 public:
  using Error::Error;
};

/// A scheme does not match the instance or the requested operation.
class SchemeError : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured row budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace cds
