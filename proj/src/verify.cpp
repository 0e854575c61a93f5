#include "if2ode/verify.hpp"

#include <algorithm>
#include <cmath>

#include "if2ode/kernels.hpp"
#include "if2ode/quadrature.hpp"
#include "if2ode/stepper.hpp"

namespace if2ode {

GridFunction reference_solve(const OdeProblem& p, Complex y0, Complex yp0,
                             double tol) {
  const Grid& grid = p.grid();
  const std::size_t n = grid.size();
  const std::size_t anchor = grid.anchor();
  std::vector<Complex> y(n), dy(n);
  y[anchor] = y0;
  dy[anchor] = yp0;

  const Expr& B = p.B();
  const Expr& C = p.C();
  const Expr& R = p.R();
  auto rhs = [&](double x, const State<2>& s) -> State<2> {
    return {s[1], evaluate(R, x) - evaluate(B, x) * s[1] - evaluate(C, x) * s[0]};
  };
  const StepperOptions opt{tol, tol};
  auto no_check = [](double, const State<2>&) {};

  for (int dir : {+1, -1}) {
    double x = grid[anchor];
    State<2> s{y0, yp0};
    double h = 0.0;
    for (std::size_t i = anchor;;) {
      if (dir > 0 ? i + 1 >= n : i == 0) break;
      i = dir > 0 ? i + 1 : i - 1;
      advance<2>(rhs, x, s, grid[i], h, opt, no_check);
      y[i] = s[0];
      dy[i] = s[1];
    }
  }
  return GridFunction(std::vector<double>(grid.nodes().begin(), grid.nodes().end()),
                      std::move(y), std::move(dy));
}

GridFunction residual(const ScalarFn& y, const ScalarFn& yprime,
                      const OdeProblem& p) {
  const Grid& grid = p.grid();
  const std::size_t n = grid.size();
  if (n < 6) throw InvalidProblem("residual needs at least six grid nodes");
  const auto nodes = grid.nodes();
  const GridFunction yp_grid(std::vector<double>(nodes.begin(), nodes.end()),
                             kernels::sample(yprime, nodes));
  const std::vector<Complex> yv = kernels::sample(y, nodes);

  std::vector<double> xs;
  std::vector<Complex> r;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const double x = nodes[i];
    const Complex d2 = finite_diff(yp_grid, x);
    const Complex d1 = yp_grid.values()[i];
    xs.push_back(x);
    r.push_back(d2 + evaluate(p.B(), x) * d1 + evaluate(p.C(), x) * yv[i] -
                evaluate(p.R(), x));
  }
  return GridFunction(std::move(xs), std::move(r));
}

double max_abs(const GridFunction& r) {
  double m = 0.0;
  for (const auto& v : r.values()) m = std::max(m, std::abs(v));
  return m;
}

VerificationMetrics compare(const Solution& formula, const GridFunction& reference) {
  VerificationMetrics m;
  m.grid_size = reference.size();
  const auto xs = reference.abscissae();
  const auto ref = reference.values();
  double ref_max = 0.0;
  for (const auto& v : ref) ref_max = std::max(ref_max, std::abs(v));
  double abs_err = 0.0, rel_err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = std::abs(formula.value(xs[i]) - ref[i]);
    abs_err = std::max(abs_err, d);
    const double denom = std::abs(ref[i]);
    if (denom > 1e-8 * ref_max) rel_err = std::max(rel_err, d / denom);
  }
  m.max_abs_error = abs_err;
  m.max_rel_error = rel_err;
  return m;
}

std::array<double, 3> check_factor_conditions(const FactorPair& fp,
                                              const OdeProblem& p) {
  // Sample on the grid with every cell bisected; the defects are read at the
  // original nodes, so the difference step is half the problem spacing.
  const auto coarse = p.grid().nodes();
  std::vector<double> xs;
  xs.reserve(2 * coarse.size() - 1);
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    if (i > 0) xs.push_back(0.5 * (coarse[i - 1] + coarse[i]));
    xs.push_back(coarse[i]);
  }
  const std::vector<Complex> g = kernels::sample(fp.g, xs);
  const std::vector<Complex> h = kernels::sample(fp.h, xs);
  const std::vector<Complex> P = kernels::sample(fp.P, xs);
  const std::vector<Complex> Q = kernels::sample(fp.Q, xs);
  std::vector<Complex> gq(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) gq[i] = g[i] * Q[i];
  const GridFunction g_grid(xs, g), h_grid(xs, h), gq_grid(xs, gq);

  std::array<double, 3> defects{};
  for (std::size_t k = 2; k + 2 < coarse.size(); ++k) {
    const std::size_t i = 2 * k;
    const double x = xs[i];
    const Complex c = evaluate(p.C(), x);
    const double ag = std::abs(g[i]);
    defects[0] = std::max(defects[0], std::abs(finite_diff(g_grid, x) - g[i] * P[i]) /
                                          (1.0 + ag * std::abs(P[i])));
    defects[1] = std::max(
        defects[1], std::abs(finite_diff(gq_grid, x) - g[i] * c) /
                        (1.0 + ag * (std::abs(c) + std::abs(P[i]) * std::abs(Q[i]))));
    defects[2] = std::max(defects[2], std::abs(finite_diff(h_grid, x) - h[i] * Q[i]) /
                                          (1.0 + std::abs(h[i]) * std::abs(Q[i])));
  }
  return defects;
}

double check_gh_invariant(const FactorPair& fp, const OdeProblem& p) {
  const Expr& B = p.B();
  const GridFunction int_b = antiderivative(
      [B](double x) { return evaluate(B, x); }, p.grid(), p.tolerances().quadrature);
  const auto nodes = p.grid().nodes();
  const std::vector<Complex> g = kernels::sample(fp.g, nodes);
  const std::vector<Complex> h = kernels::sample(fp.h, nodes);
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Complex e = std::exp(int_b.values()[i]);
    worst = std::max(worst, std::abs(g[i] * h[i] - e) / std::abs(e));
  }
  return worst;
}

}  // namespace if2ode
