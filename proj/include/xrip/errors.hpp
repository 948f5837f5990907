#pragma once

#include <stdexcept>
#include <string>

namespace xrip {

// Thrown when an iterative scheme fails to reach its tolerance within the
// iteration cap. Carries the last iterate's value so callers can inspect it.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double last_value)
        : std::runtime_error(what), last_value_(last_value) {}
    double last_value() const { return last_value_; }

  private:
    double last_value_;
};

// Thrown when an enumeration or materialization would exceed its budget.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Thrown on malformed input files; carries the 1-based line number.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, long line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    long line() const { return line_; }

  private:
    long line_;
};

}  // namespace xrip
