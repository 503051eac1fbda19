#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ncalg {

/// Operands live in different rings, alphabets, degrees or subring contexts.
class MismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation is not defined for this ring kind or form combination.
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition was violated by the caller.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An enumeration would exceed its configured size guard.
class SizeGuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. Line and column are 1-based.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::invalid_argument(message + " at line " + std::to_string(line) +
                              ", column " + std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ncalg
