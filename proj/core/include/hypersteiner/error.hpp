#pragma once

#include <stdexcept>
#include <string>

namespace hypersteiner {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed STP input. Carries the 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// A precondition on the caller's arguments was not met.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An LP or blowup graph has no feasible point.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A guarantee the algorithms rely on did not hold. Always a bug or corrupted
/// input state, never a user error.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace hypersteiner
