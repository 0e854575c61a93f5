#pragma once

#include "if2ode/grid.hpp"

namespace if2ode {

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr int kMaxQuadDepth = 40;

struct QuadratureResult {
  Complex value;
  double error = 0.0;
  std::size_t panels = 0;
};

/// Adaptive Gauss-Kronrod 7/15 with bisection of the worst panel until the
/// summed error estimate is below tol * (1 + |result|). Throws
/// ToleranceNotMet when a panel would exceed `max_depth` bisections.
QuadratureResult integrate_detailed(const ScalarFn& f, double a, double b,
                                    double tol = kDefaultQuadTol,
                                    int max_depth = kMaxQuadDepth);

Complex integrate(const ScalarFn& f, double a, double b,
                  double tol = kDefaultQuadTol);

/// F(x) = integral of f from the grid's base point to x, on every node, with
/// f itself stored as the slopes of the interpolant. F(x0) is exactly zero.
GridFunction antiderivative(const ScalarFn& f, const Grid& grid,
                            double tol = kDefaultQuadTol);

/// Same as antiderivative() using the serial reference kernels.
GridFunction antiderivative_serial(const ScalarFn& f, const Grid& grid,
                                   double tol = kDefaultQuadTol);

/// Convenience form building a grid of n nodes on `iv` anchored at x0.
GridFunction antiderivative(const ScalarFn& f, double x0, Interval iv,
                            std::size_t n = kDefaultGridSize,
                            double tol = kDefaultQuadTol);

}  // namespace if2ode
