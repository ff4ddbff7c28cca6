#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crntime {

/// Base for every domain error raised by the library. The CLI maps these to
/// exit code 1 and prints what() verbatim.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Precondition or argument outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class NotApplicableError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Raised by the kinetics module for reactions with zero or >= 3 reactants.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// A Chernoff lemma was evaluated outside its stated hypotheses.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

}  // namespace crntime
