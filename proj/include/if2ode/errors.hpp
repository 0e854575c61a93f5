#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace if2ode {

using Complex = std::complex<double>;

/// Base class for every library failure. `kind()` is a stable identifier used
/// in CLI diagnostics and the JSON error payload.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string expected, std::string found);

  std::size_t offset() const noexcept { return offset_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t offset_;
  std::string expected_;
  std::string found_;
};

/// Evaluation outside an expression's domain (division by zero, ln 0).
class DomainError : public Error {
 public:
  DomainError(const std::string& what, Complex x);
  Complex x() const noexcept { return x_; }

 private:
  Complex x_;
};

class ToleranceNotMet : public Error {
 public:
  ToleranceNotMet(double achieved, double requested);
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class OutOfRange : public Error {
 public:
  explicit OutOfRange(const std::string& message) : Error("OutOfRange", message) {}
};

class InvalidProblem : public Error {
 public:
  explicit InvalidProblem(const std::string& message)
      : Error("InvalidProblem", message) {}
};

class InvalidComplementary : public Error {
 public:
  InvalidComplementary(double residual, double bound);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class IntervalTooLong : public Error {
 public:
  IntervalTooLong(double length, double limit);
};

class ZeroOnInterval : public Error {
 public:
  explicit ZeroOnInterval(double x);
  double x() const noexcept { return x_; }

 private:
  double x_;
};

/// Riccati solution exceeded the blow-up threshold; `x()` locates the pole.
class SingularityDetected : public Error {
 public:
  explicit SingularityDetected(double x);
  double x() const noexcept { return x_; }

 private:
  double x_;
};

class StepFailure : public Error {
 public:
  StepFailure(double x, const std::string& reason);
  double x() const noexcept { return x_; }

 private:
  double x_;
};

class SingularSystem : public Error {
 public:
  explicit SingularSystem(double det)
      : Error("SingularSystem",
              "initial-condition system is singular (|det| = " +
                  std::to_string(det) + ")") {}
};

class RouteNotApplicable : public Error {
 public:
  explicit RouteNotApplicable(const std::string& message)
      : Error("RouteNotApplicable", message) {}
};

}  // namespace if2ode
