#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "if2ode/classify.hpp"
#include "if2ode/factors.hpp"
#include "if2ode/grid.hpp"

namespace if2ode {

/// y(x) = particular(x) + C1 basis_u(x) + C2 basis_v(x), where
///   particular = (1/h) int_{x0}^x (h/g) I_R,   I_R = int_{x0}^x g R,
///   basis_u    = (1/h) J,                       J   = int_{x0}^x h/g,
///   basis_v    = 1/h.
struct Solution {
  RouteKind route = RouteKind::GeneralRiccati;
  double x0 = 0.0;
  GridFunction particular;
  GridFunction basis_u;
  ScalarFn basis_v;
  GridFunction inner_r;
  GridFunction kernel_j;
  /// (C1, C2) when initial conditions were fitted.
  std::optional<std::array<Complex, 2>> constants;

  Complex value(double x, Complex c1, Complex c2) const {
    return particular(x) + c1 * basis_u(x) + c2 * basis_v(x);
  }
  /// Uses the fitted constants, or zero when none were fitted.
  Complex value(double x) const;
};

Solution assemble_general(const FactorPair& fp, const Expr& R, const Grid& grid,
                          double tol = 1e-10);

/// y'(x) = (I_R(x) + C1) / g(x) - Q(x) y(x).
Complex derivative_of_solution(const Solution& s, const FactorPair& fp, double x,
                               Complex c1, Complex c2);
/// Same with the fitted (or zero) constants.
Complex derivative_of_solution(const Solution& s, const FactorPair& fp, double x);

/// Solves y(x0) = y0, y'(x0) = yp0 for (C1, C2).
std::array<Complex, 2> apply_initial_conditions(const Solution& s,
                                                const FactorPair& fp, Complex y0,
                                                Complex yp0, double x0);

/// Two real, linearly independent homogeneous solutions built from the real
/// and imaginary parts of the (possibly complex) basis_u, basis_v.
struct RealBasis {
  std::vector<double> u;
  std::vector<double> v;
  std::string u_source;
  std::string v_source;
};
RealBasis real_basis(const Solution& s, const FactorPair& fp, const Grid& grid);

struct VerificationMetrics {
  /// Filled only when a reference solution was computed (requires ICs).
  std::optional<double> max_abs_error;
  std::optional<double> max_rel_error;
  double max_residual = 0.0;
  /// Normalised defects of g' = gP, (gQ)' = gC, h' = hQ.
  std::array<double, 3> factor_defects{};
  /// max |g h - exp(int B)| / |exp(int B)|.
  double gh_defect = 0.0;
  /// max |Im y| / (1 + max |y|).
  double imag_residue = 0.0;
  std::size_t grid_size = 0;
};

struct SolveConfig {
  std::optional<RouteKind> force_route;
  RiccatiConfig riccati;
  /// Also run the reference integrator when initial conditions are present.
  bool reference = true;
};

struct SolveReport {
  RouteVerdict verdict;
  RouteKind attempted = RouteKind::GeneralRiccati;
  RouteKind used = RouteKind::GeneralRiccati;
  FactorPair factors;
  Solution solution;
  VerificationMetrics metrics;
  std::vector<std::string> warnings;
  /// True when the reported samples are the real parts of y, y'.
  bool real_output = true;
  std::vector<double> x;
  std::vector<Complex> y;
  std::vector<Complex> yprime;
};

/// classify -> factors (with fallback) -> assemble -> fit ICs -> verify.
SolveReport solve(const OdeProblem& p, const SolveConfig& cfg = {});

/// Factor construction for one route, without fallback.
FactorPair build_factors(const OdeProblem& p, const RouteVerdict& verdict,
                         RouteKind route, const RiccatiConfig& riccati);

}  // namespace if2ode
