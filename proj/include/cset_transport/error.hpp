#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed theory DSL, instance JSON, or LP text.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// One or more structural invariants failed; `problems()` lists each of them.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Metric or measure data required by a computation is absent.
class MissingData : public Error {
 public:
  using Error::Error;
};

/// Exhaustive enumeration would exceed the configured guard.
class GuardExceeded : public Error {
 public:
  GuardExceeded(double count, double guard)
      : Error("enumeration of " + std::to_string(static_cast<long double>(count)) +
              " candidates exceeds guard " + std::to_string(static_cast<long double>(guard)) +
              " (pass --force to run anyway)"),
        count_(count) {}

  double count() const noexcept { return count_; }

 private:
  double count_;
};

/// The simplex solver lost numerical control.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A property that must hold mathematically was observed to fail.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace cst
