#pragma once

#include <stdexcept>
#include <string>

namespace stopwait {

// Malformed input data (event logs, observation files).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message
                                : message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Numerical failure (non-convergence, degenerate input).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stopwait
