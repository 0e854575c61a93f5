#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "if2ode/classify.hpp"
#include "if2ode/grid.hpp"

namespace if2ode::cli {

enum class OutputFormat { Text, Csv, Json };

struct CliConfig {
  std::string subcommand;
  std::string B = "0";
  std::string C = "0";
  std::string R = "0";
  std::optional<std::string> f;
  double a = 0.0;
  double b = 1.0;
  std::optional<double> x0;
  std::optional<double> y0;
  std::optional<double> yp0;
  double q0 = 0.0;
  double blowup = 1e6;
  std::size_t grid = kDefaultGridSize;
  Tolerances tol;
  std::optional<std::string> force_route;
  OutputFormat format = OutputFormat::Text;
  std::optional<std::string> output;
};

/// Applies an IF2ODE_TOL-style override: either one number (quadrature and
/// stepper tolerance) or comma-separated key=value pairs with keys
/// quad, const, comp, step. Throws std::invalid_argument on bad input.
Tolerances parse_tolerance_override(const std::string& text, Tolerances base);

/// Exit codes: 0 success, 1 usage error, 2 solve or verification failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace if2ode::cli
