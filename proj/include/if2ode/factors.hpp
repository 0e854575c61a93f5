#pragma once

#include <memory>
#include <optional>

#include "if2ode/classify.hpp"
#include "if2ode/grid.hpp"

namespace if2ode {

/// Settings for the numeric Riccati route.
struct RiccatiConfig {
  /// Q(x0).
  double q0 = 0.0;
  /// |Q| above this is reported as a movable singularity.
  double blowup = 1e6;
  double tol = 1e-10;
};

/// Integrating factors g, h with g' = gP, h' = hQ, (gQ)' = gC and P + Q = B.
/// All members are immutable callables, safe to evaluate concurrently.
struct FactorPair {
  RouteKind route = RouteKind::GeneralRiccati;
  ScalarFn g;
  ScalarFn h;
  ScalarFn P;
  ScalarFn Q;
  /// f = Q - B/2 on the discriminant routes.
  std::optional<ScalarFn> riccati_shift;
  /// Free constant placing the singular points of the discriminant routes.
  std::optional<double> c;
  /// k = D / 4 on the constant-discriminant route.
  std::optional<double> k;
  /// Q on the grid, for the numeric Riccati route.
  std::shared_ptr<const GridFunction> riccati_grid;
};

/// q^2 - B q + C.
Complex riccati_rhs(Complex q, Complex Bx, Complex Cx);

/// Constant coefficients: P, Q are the roots of r^2 - B r + C (principal
/// square root of B^2 - 4C, P takes the + sign); g = e^{P(x-x0)}, h = e^{Q(x-x0)}.
FactorPair factors_constant(double B, double C, double x0);

/// D = 0: g = (x+c) E, h = E / (x+c) with E = exp(int_{x0}^x B/2) and
/// c = 1 - a, normalised so g(x0) = h(x0) = 1.
FactorPair factors_discriminant_zero(const Expr& B, const Grid& grid,
                                     double tol = 1e-10);

/// D = 4k, k != 0: with s = sqrt(k) and w = e^{s(x+c)} - e^{-s(x+c)},
/// g = E w, h = E / w, normalised so g(x0) = h(x0) = 1. For k < 0, c puts
/// the half-period of w symmetrically around [a, b]; throws IntervalTooLong
/// when b - a >= pi / sqrt(-k).
FactorPair factors_discriminant_const(const Expr& B, double k, const Grid& grid,
                                      double tol = 1e-10);

/// One known homogeneous solution f: h = 1/f, g = f exp(int_{x0}^x B),
/// Q = -f'/f. Throws ZeroOnInterval if f vanishes on the grid.
FactorPair factors_from_complementary(const Expr& f, const Expr& B,
                                      const Grid& grid, double tol = 1e-10);

/// Numeric Riccati route: integrates Q' = Q^2 - BQ + C from (x0, q0) to both
/// ends of the grid, then h = exp(int Q), g = exp(int B - int Q).
FactorPair factors_riccati(const Expr& B, const Expr& C,
                           const RiccatiConfig& cfg, const Grid& grid,
                           double quad_tol = 1e-10);

}  // namespace if2ode
