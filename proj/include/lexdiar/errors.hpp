#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lexdiar {

// Caller handed us something outside an operation's domain.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed file content. `line` is 1-based (a line or a data row, as named
// by `unit`); 0 when not tied to a position.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, const std::string& unit = "line")
      : std::runtime_error(line == 0 ? what : unit + " " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Eigensolver or clustering failure; message carries matrix diagnostics.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lexdiar
