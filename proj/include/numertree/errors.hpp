#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace numertree {

// Exit-code conventions shared by the library and the CLI:
//   2 parse/validation, 3 resource budget, 4 insufficient data / unverified
//   prerequisites. Verification failure (exit 1) is not an exception; it is
//   a nonempty violation list.
class Error : public std::runtime_error {
 public:
  Error(std::string msg, int exit_code)
      : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

 private:
  int exit_code_;
};

class ParseError : public Error {
 public:
  explicit ParseError(std::string msg) : Error(std::move(msg), 2) {}
};

// Invalid word; `position` is the first offending digit index.
class WordError : public ParseError {
 public:
  WordError(std::string msg, std::size_t position)
      : ParseError(std::move(msg)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class BudgetError : public Error {
 public:
  explicit BudgetError(std::string msg) : Error(std::move(msg), 3) {}
};

class InsufficientError : public Error {
 public:
  explicit InsufficientError(std::string msg) : Error(std::move(msg), 4) {}
};

}  // namespace numertree
