#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace keybasket {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input; carries the 1-based line number where parsing failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Internal inconsistency between intermediate results.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace keybasket
