#pragma once

#include <stdexcept>
#include <string>

namespace pgmap {

/// Domain invariant or precondition violation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input. `line` is 1-based; 0 means "not line-specific".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message
                                    : message),
        line_(line) {}

  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// File container problems: bad magic, truncation, unreadable paths.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pgmap
