#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace beliefplan {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidCovariance : public Error {
 public:
  using Error::Error;
};

class IllConditionedUpdate : public Error {
 public:
  using Error::Error;
};

class NoObservation : public Error {
 public:
  using Error::Error;
};

class DegeneratePolytope : public Error {
 public:
  using Error::Error;
};

/// Formula construction and parsing failures.
class FormulaError : public Error {
 public:
  using Error::Error;
};

class UnsupportedBound : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

class NameCollision : public FormulaError {
 public:
  using FormulaError::FormulaError;
};

/// Syntax error with a 1-based source position.
class ParseError : public FormulaError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : FormulaError(what + " at line " + std::to_string(line) + ", column " +
                     std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class InsufficientTrace : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

class WindowViolation : public Error {
 public:
  using Error::Error;
};

class MissingGains : public Error {
 public:
  using Error::Error;
};

/// Raised when a result that must hold by construction does not.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace beliefplan
