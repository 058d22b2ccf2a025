#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace clockauction {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a domain rule (bad quantity, unknown product, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file. `line()` is the 1-based line in the source file.
class ParseError : public ValidationError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// The optimizer could not produce a trustworthy answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

}  // namespace clockauction
