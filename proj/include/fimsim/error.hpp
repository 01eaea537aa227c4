#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fimsim {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

// Raised when a rock/fluid property evaluates to a non-physical value.
class PropertyError : public Error {
 public:
  using Error::Error;
};

class WellError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class LinearAlgebraError : public Error {
 public:
  using Error::Error;
};

class ZeroPivotError : public LinearAlgebraError {
 public:
  explicit ZeroPivotError(std::size_t row)
      : LinearAlgebraError("zero pivot in row " + std::to_string(row)), row_(row) {}
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DeckError : public Error {
 public:
  DeckError(const std::string& msg, std::size_t line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace fimsim
