#pragma once

#include <stdexcept>
#include <string>

namespace ecorank {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed a parameter outside its documented domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Input data cannot be processed (malformed files, empty networks, label mismatches).
class DataError : public Error {
 public:
  using Error::Error;
};

/// A computation produced a result that carries no ranking information.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class EmptyNetwork : public DataError {
 public:
  EmptyNetwork() : DataError("network is empty after removing isolated nodes") {}
  using DataError::DataError;
};

class LabelMismatch : public DataError {
 public:
  using DataError::DataError;
};

class ZeroDegree : public DataError {
 public:
  using DataError::DataError;
};

class EmptyYear : public DataError {
 public:
  using DataError::DataError;
};

class EmptyIntersection : public DataError {
 public:
  using DataError::DataError;
};

class NegativeValue : public DataError {
 public:
  using DataError::DataError;
};

class ParseError : public DataError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : DataError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class NonPositiveGamma : public InvalidArgument {
 public:
  explicit NonPositiveGamma(double gamma)
      : InvalidArgument("extremality parameter must be positive, got " + std::to_string(gamma)) {}
};

/// All scores equal; standardization is undefined.
class DegenerateScores : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Rank correlation requested for a constant vector.
class DegenerateInput : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ecorank
