#pragma once

#include <array>

#include "if2ode/classify.hpp"
#include "if2ode/factors.hpp"
#include "if2ode/grid.hpp"
#include "if2ode/solver.hpp"

namespace if2ode {

/// Independent Runge-Kutta 5(4) solution of (y, y')' = (y', R - B y' - C y)
/// on the problem grid. The returned interpolant stores y' as its slopes.
GridFunction reference_solve(const OdeProblem& p, Complex y0, Complex yp0,
                             double tol = 1e-10);

/// r = y'' + B y' + C y - R at the interior grid nodes, with y'' taken as a
/// finite difference of the sampled y'.
GridFunction residual(const ScalarFn& y, const ScalarFn& yprime,
                      const OdeProblem& p);

/// Max absolute and relative differences between the fitted formula solution
/// and the reference at every grid node.
VerificationMetrics compare(const Solution& formula, const GridFunction& reference);

/// Normalised maxima over interior nodes of
///   |g' - gP| / (1 + |g||P|),
///   |(gQ)' - gC| / (1 + |g|(|C| + |P||Q|)),
///   |h' - hQ| / (1 + |h||Q|).
std::array<double, 3> check_factor_conditions(const FactorPair& fp,
                                              const OdeProblem& p);

/// max |g h - exp(int_{x0}^x B)| / |exp(int_{x0}^x B)| over the grid.
double check_gh_invariant(const FactorPair& fp, const OdeProblem& p);

/// Max |r| of a residual grid function.
double max_abs(const GridFunction& r);

}  // namespace if2ode
