#include "if2ode/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "if2ode/kernels.hpp"
#include "if2ode/quadrature.hpp"
#include "if2ode/verify.hpp"

namespace if2ode {

Complex Solution::value(double x) const {
  if (!constants) return particular(x);
  return value(x, (*constants)[0], (*constants)[1]);
}

Solution assemble_general(const FactorPair& fp, const Expr& R, const Grid& grid,
                          double tol) {
  const ScalarFn g = fp.g;
  const ScalarFn h = fp.h;
  auto ratio = [g, h](double x) { return h(x) / g(x); };

  GridFunction inner =
      antiderivative([g, R](double x) { return g(x) * evaluate(R, x); }, grid, tol);
  GridFunction kernel = antiderivative(ratio, grid, tol);
  GridFunction outer = antiderivative(
      [ratio, &inner](double x) { return ratio(x) * inner(x); }, grid, tol);

  const auto nodes = grid.nodes();
  const std::vector<Complex> gv = kernels::sample(g, nodes);
  const std::vector<Complex> hv = kernels::sample(h, nodes);
  const std::vector<Complex> qv = kernels::sample(fp.Q, nodes);

  const std::size_t n = grid.size();
  std::vector<Complex> part(n), part_slope(n), u(n), u_slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    part[i] = outer.values()[i] / hv[i];
    part_slope[i] = inner.values()[i] / gv[i] - qv[i] * part[i];
    u[i] = kernel.values()[i] / hv[i];
    u_slope[i] = 1.0 / gv[i] - qv[i] * u[i];
  }
  const std::vector<double> xs(nodes.begin(), nodes.end());

  Solution s;
  s.route = fp.route;
  s.x0 = grid.base_point();
  s.particular = GridFunction(xs, std::move(part), std::move(part_slope));
  s.basis_u = GridFunction(xs, std::move(u), std::move(u_slope));
  s.basis_v = [h](double x) { return 1.0 / h(x); };
  s.inner_r = std::move(inner);
  s.kernel_j = std::move(kernel);
  return s;
}

Complex derivative_of_solution(const Solution& s, const FactorPair& fp, double x,
                               Complex c1, Complex c2) {
  return (s.inner_r(x) + c1) / fp.g(x) - fp.Q(x) * s.value(x, c1, c2);
}

Complex derivative_of_solution(const Solution& s, const FactorPair& fp, double x) {
  if (!s.constants) return derivative_of_solution(s, fp, x, 0.0, 0.0);
  return derivative_of_solution(s, fp, x, (*s.constants)[0], (*s.constants)[1]);
}

std::array<Complex, 2> apply_initial_conditions(const Solution& s,
                                                const FactorPair& fp, Complex y0,
                                                Complex yp0, double x0) {
  const Complex g0 = fp.g(x0);
  const Complex q0 = fp.Q(x0);
  const Complex u0 = s.basis_u(x0);
  const Complex v0 = s.basis_v(x0);
  const Complex p0 = s.particular(x0);
  const Complex du0 = 1.0 / g0 - q0 * u0;
  const Complex dv0 = -q0 * v0;
  const Complex dp0 = s.inner_r(x0) / g0 - q0 * p0;

  const Complex det = u0 * dv0 - v0 * du0;
  const double scale = (std::abs(u0) + std::abs(v0)) * (std::abs(du0) + std::abs(dv0));
  if (!(std::abs(det) >= 1e-12 * scale) || scale == 0.0)
    throw SingularSystem(std::abs(det));
  const Complex r0 = y0 - p0;
  const Complex r1 = yp0 - dp0;
  return {(r0 * dv0 - v0 * r1) / det, (u0 * r1 - r0 * du0) / det};
}

RealBasis real_basis(const Solution& s, const FactorPair& fp, const Grid& grid) {
  struct Candidate {
    std::string name;
    std::vector<double> values;
    double v0, d0;
  };
  const double x0 = grid.base_point();
  const Complex g0 = fp.g(x0), q0 = fp.Q(x0);
  const Complex u0 = s.basis_u(x0), v0 = s.basis_v(x0);
  const Complex du0 = 1.0 / g0 - q0 * u0;
  const Complex dv0 = -q0 * v0;

  const auto nodes = grid.nodes();
  const std::vector<Complex> vv = kernels::sample(s.basis_v, nodes);
  std::vector<Candidate> cands(4);
  cands[0] = {"re(basis_u)", {}, u0.real(), du0.real()};
  cands[1] = {"re(basis_v)", {}, v0.real(), dv0.real()};
  cands[2] = {"im(basis_u)", {}, u0.imag(), du0.imag()};
  cands[3] = {"im(basis_v)", {}, v0.imag(), dv0.imag()};
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Complex u = s.basis_u.values()[i];
    cands[0].values.push_back(u.real());
    cands[1].values.push_back(vv[i].real());
    cands[2].values.push_back(u.imag());
    cands[3].values.push_back(vv[i].imag());
  }
  std::size_t best_i = 0, best_j = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      const double ni = std::hypot(cands[i].v0, cands[i].d0);
      const double nj = std::hypot(cands[j].v0, cands[j].d0);
      if (ni == 0.0 || nj == 0.0) continue;
      const double det =
          std::abs(cands[i].v0 * cands[j].d0 - cands[j].v0 * cands[i].d0) / (ni * nj);
      if (det > best + 1e-9) {
        best = det;
        best_i = i;
        best_j = j;
      }
    }
  }
  return {std::move(cands[best_i].values), std::move(cands[best_j].values),
          cands[best_i].name, cands[best_j].name};
}

FactorPair build_factors(const OdeProblem& p, const RouteVerdict& verdict,
                         RouteKind route, const RiccatiConfig& riccati) {
  const Grid& grid = p.grid();
  const double tol = p.tolerances().quadrature;
  switch (route) {
    case RouteKind::ConstantCoefficients: {
      if (const auto* cc = std::get_if<RouteVerdict::ConstantCoefficients>(&verdict.route))
        return factors_constant(cc->B, cc->C, grid.base_point());
      const auto b = detect_constant(p.B(), p.interval(), p.tolerances().constant);
      const auto c = detect_constant(p.C(), p.interval(), p.tolerances().constant);
      if (!b || !c)
        throw RouteNotApplicable("constant route needs constant B and C");
      return factors_constant(*b, *c, grid.base_point());
    }
    case RouteKind::KnownComplementary:
      if (!p.complementary())
        throw RouteNotApplicable("complementary route needs a known solution f");
      return factors_from_complementary(*p.complementary(), p.B(), grid, tol);
    case RouteKind::DiscriminantZero:
      return factors_discriminant_zero(p.B(), grid, tol);
    case RouteKind::DiscriminantConstant: {
      double k = 0.0;
      if (const auto* dc = std::get_if<RouteVerdict::DiscriminantConstant>(&verdict.route))
        k = dc->k;
      else if (verdict.discriminant_value)
        k = *verdict.discriminant_value / 4.0;
      if (k == 0.0)
        throw RouteNotApplicable("constant-discriminant route needs D constant and nonzero");
      return factors_discriminant_const(p.B(), k, grid, tol);
    }
    case RouteKind::GeneralRiccati: {
      RiccatiConfig cfg = riccati;
      cfg.tol = std::min(cfg.tol, p.tolerances().stepper);
      return factors_riccati(p.B(), p.C(), cfg, grid, tol);
    }
  }
  throw RouteNotApplicable("unknown route");
}

namespace {

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool is_real(Complex z) { return z.imag() == 0.0; }

}  // namespace

SolveReport solve(const OdeProblem& p, const SolveConfig& cfg) {
  SolveReport report;
  report.verdict = classify(p);
  report.attempted = cfg.force_route.value_or(report.verdict.kind());
  report.used = report.attempted;

  try {
    report.factors = build_factors(p, report.verdict, report.used, cfg.riccati);
  } catch (const IntervalTooLong& e) {
    report.warnings.push_back(std::string("route fallback: ") +
                              std::string(route_name(report.used)) + " -> " +
                              std::string(route_name(RouteKind::GeneralRiccati)) +
                              " (" + e.what() + ")");
    report.used = RouteKind::GeneralRiccati;
    report.factors = build_factors(p, report.verdict, report.used, cfg.riccati);
  }

  const Grid& grid = p.grid();
  report.solution =
      assemble_general(report.factors, p.R(), grid, p.tolerances().quadrature);

  bool real_inputs = true;
  if (const auto& ic = p.initial_conditions()) {
    report.solution.constants = apply_initial_conditions(
        report.solution, report.factors, ic->y0, ic->yp0, grid.base_point());
    real_inputs = is_real(ic->y0) && is_real(ic->yp0);
  }

  const Solution& s = report.solution;
  const FactorPair& fp = report.factors;
  report.x.assign(grid.nodes().begin(), grid.nodes().end());
  report.y = kernels::sample([&s](double x) { return s.value(x); }, grid.nodes());
  report.yprime = kernels::sample(
      [&s, &fp](double x) { return derivative_of_solution(s, fp, x); }, grid.nodes());

  VerificationMetrics& m = report.metrics;
  m.grid_size = grid.size();
  double ymax = 0.0, imax = 0.0;
  for (const auto& v : report.y) {
    ymax = std::max(ymax, std::abs(v));
    imax = std::max(imax, std::abs(v.imag()));
  }
  m.imag_residue = imax / (1.0 + ymax);
  report.real_output = real_inputs && m.imag_residue <= 1e-8;
  if (!report.real_output)
    report.warnings.push_back("solution is complex-valued (imaginary residue " +
                              format_g(m.imag_residue) + ")");

  m.max_residual = max_abs(residual([&s](double x) { return s.value(x); },
                                    [&s, &fp](double x) {
                                      return derivative_of_solution(s, fp, x);
                                    },
                                    p));
  m.factor_defects = check_factor_conditions(fp, p);
  m.gh_defect = check_gh_invariant(fp, p);

  if (cfg.reference && p.initial_conditions()) {
    const auto& ic = *p.initial_conditions();
    const GridFunction ref =
        reference_solve(p, ic.y0, ic.yp0, p.tolerances().stepper);
    const VerificationMetrics cmp = compare(s, ref);
    m.max_abs_error = cmp.max_abs_error;
    m.max_rel_error = cmp.max_rel_error;
  }
  return report;
}

}  // namespace if2ode
