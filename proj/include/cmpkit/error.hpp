#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cmpkit {

/// Pipeline stage that raised an error. The CLI prints it as the diagnostic prefix.
enum class Stage { domain, series, bracket, solve, fit, grid, parse };

std::string_view to_string(Stage stage) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Stage stage, const std::string& what)
      : std::runtime_error(what), stage_(stage) {}

  Stage stage() const noexcept { return stage_; }

 private:
  Stage stage_;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(Stage::domain, what) {}
};

/// Normalizing series diverges (ν = 0 with λ ≥ 1) or needs an unworkable window.
class DivergentSeriesError : public Error {
 public:
  explicit DivergentSeriesError(const std::string& what)
      : Error(Stage::series, what) {}
};

/// Iterative procedure failed; stage is bracket, solve or fit.
class ConvergenceError : public Error {
 public:
  ConvergenceError(Stage stage, const std::string& what) : Error(stage, what) {}
};

/// Interpolation query outside the grid hull.
class OutOfRangeError : public Error {
 public:
  explicit OutOfRangeError(const std::string& what) : Error(Stage::grid, what) {}
};

/// Malformed input document. `line()` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(Stage::parse, what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace cmpkit
