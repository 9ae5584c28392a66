#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elunif {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CyclicTBoxError : public Error {
 public:
  using Error::Error;
};

class CyclicAssignmentError : public Error {
 public:
  using Error::Error;
};

class NotFlatError : public Error {
 public:
  using Error::Error;
};

class NotGroundError : public Error {
 public:
  using Error::Error;
};

class SizeLimitError : public Error {
 public:
  using Error::Error;
};

class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace elunif
