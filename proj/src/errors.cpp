#include "if2ode/errors.hpp"

#include <cstdio>

namespace if2ode {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt(Complex z) {
  if (z.imag() == 0.0) return fmt(z.real());
  return "(" + fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") +
         fmt(std::abs(z.imag())) + "i)";
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::string expected,
                       std::string found)
    : Error("ParseError", "parse error at offset " + std::to_string(offset) +
                              ": expected " + expected + ", found " + found),
      offset_(offset),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

DomainError::DomainError(const std::string& what, Complex x)
    : Error("DomainError", what + " at x = " + fmt(x)), x_(x) {}

ToleranceNotMet::ToleranceNotMet(double achieved, double requested)
    : Error("ToleranceNotMet", "quadrature reached error " + fmt(achieved) +
                                   " (requested " + fmt(requested) + ")"),
      achieved_(achieved) {}

InvalidComplementary::InvalidComplementary(double residual, double bound)
    : Error("InvalidComplementary",
            "supplied complementary solution has residual " + fmt(residual) +
                " (bound " + fmt(bound) + ")"),
      residual_(residual) {}

IntervalTooLong::IntervalTooLong(double length, double limit)
    : Error("IntervalTooLong", "interval length " + fmt(length) +
                                   " reaches the oscillation limit " +
                                   fmt(limit)) {}

ZeroOnInterval::ZeroOnInterval(double x)
    : Error("ZeroOnInterval", "complementary solution vanishes near x=" +
                                  fmt(x) + "; shrink the interval"),
      x_(x) {}

SingularityDetected::SingularityDetected(double x)
    : Error("SingularityDetected", "SingularityDetected near x=" + fmt(x) +
                                       "; try --riccati-q0 <other>"),
      x_(x) {}

StepFailure::StepFailure(double x, const std::string& reason)
    : Error("StepFailure", "step failure at x=" + fmt(x) + ": " + reason),
      x_(x) {}

}  // namespace if2ode
