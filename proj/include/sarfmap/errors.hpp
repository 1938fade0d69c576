#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sarfmap {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text. Carries the 1-based line of the offending record.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Well-formed input that violates a structural rule (dangling ids, duplicates...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sarfmap
