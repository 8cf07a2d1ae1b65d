#pragma once

#include <stdexcept>
#include <string>

namespace kecss {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Input exceeds the size an exhaustive routine is allowed to handle.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace kecss
