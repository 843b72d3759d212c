#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or parameter set (dimension cap, negative rate, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Operator/state dimensions do not agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Adaptive integrator could not keep the step size above the underflow limit.
class StiffnessError : public Error {
 public:
  StiffnessError(double t, const std::string& what)
      : Error(what), time_(t) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

/// Liouvillian has no unique steady state.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Numerical solve finished but a post-condition failed.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Two-time correlation asked for a vanishing normalization.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

/// Lifetime data show no enhancement where one is required.
class NoEnhancementError : public Error {
 public:
  using Error::Error;
};

/// Requested parameter regime is outside what the formula supports.
class UnsupportedRegimeError : public Error {
 public:
  using Error::Error;
};

/// Bad parameter vector handed to a fit model.
class InvalidModelError : public Error {
 public:
  using Error::Error;
};

/// Normal equations are singular along `direction()`.
class DegenerateFitError : public Error {
 public:
  DegenerateFitError(std::string direction, const std::string& what)
      : Error(what), direction_(std::move(direction)) {}
  const std::string& direction() const noexcept { return direction_; }

 private:
  std::string direction_;
};

/// Text input could not be parsed. Carries the location of the failure.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, std::size_t column,
             const std::string& message)
      : Error(file + ":" + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string file_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace cqed
