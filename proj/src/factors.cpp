#include "if2ode/factors.hpp"

#include <cmath>
#include <numbers>

#include "if2ode/kernels.hpp"
#include "if2ode/quadrature.hpp"
#include "if2ode/stepper.hpp"

namespace if2ode {

Complex riccati_rhs(Complex q, Complex Bx, Complex Cx) {
  return q * q - Bx * q + Cx;
}

FactorPair factors_constant(double B, double C, double x0) {
  const Complex root = std::sqrt(Complex(B * B - 4.0 * C));
  const Complex P = 0.5 * (B + root);
  const Complex Q = 0.5 * (B - root);
  FactorPair fp;
  fp.route = RouteKind::ConstantCoefficients;
  fp.g = [P, x0](double x) { return std::exp(P * (x - x0)); };
  fp.h = [Q, x0](double x) { return std::exp(Q * (x - x0)); };
  fp.P = [P](double) { return P; };
  fp.Q = [Q](double) { return Q; };
  return fp;
}

namespace {

// exp(int_{x0}^x scale * B)
std::shared_ptr<const GridFunction> integral_of(const Expr& B, double scale,
                                                const Grid& grid, double tol) {
  return std::make_shared<const GridFunction>(antiderivative(
      [B, scale](double x) { return scale * evaluate(B, x); }, grid, tol));
}

}  // namespace

FactorPair factors_discriminant_zero(const Expr& B, const Grid& grid,
                                     double tol) {
  const double c = 1.0 - grid.interval().a;
  const double xi0 = grid.base_point() + c;
  auto half_b = integral_of(B, 0.5, grid, tol);

  FactorPair fp;
  fp.route = RouteKind::DiscriminantZero;
  fp.c = c;
  fp.g = [half_b, c, xi0](double x) {
    return (x + c) / xi0 * std::exp((*half_b)(x));
  };
  fp.h = [half_b, c, xi0](double x) {
    return xi0 / (x + c) * std::exp((*half_b)(x));
  };
  fp.P = [B, c](double x) { return 0.5 * evaluate(B, x) + 1.0 / (x + c); };
  fp.Q = [B, c](double x) { return 0.5 * evaluate(B, x) - 1.0 / (x + c); };
  fp.riccati_shift = [c](double x) { return Complex(-1.0 / (x + c)); };
  return fp;
}

FactorPair factors_discriminant_const(const Expr& B, double k, const Grid& grid,
                                      double tol) {
  if (k == 0.0) throw RouteNotApplicable("constant-discriminant route needs k != 0");
  const Interval iv = grid.interval();
  double c = 1.0 - iv.a;
  if (k < 0) {
    const double half_period = std::numbers::pi / std::sqrt(-k);
    if (iv.length() >= half_period) throw IntervalTooLong(iv.length(), half_period);
    c = 0.5 * (half_period - iv.length()) - iv.a;
  }
  const Complex s = std::sqrt(Complex(k));
  auto w = [s, c](double x) {
    return std::exp(s * (x + c)) - std::exp(-s * (x + c));
  };
  // s (e^{s xi} + e^{-s xi}) / w, the logarithmic derivative of w
  auto dlog_w = [s, c](double x) {
    const Complex ep = std::exp(s * (x + c));
    const Complex em = std::exp(-s * (x + c));
    return s * (ep + em) / (ep - em);
  };
  const Complex w0 = w(grid.base_point());
  auto half_b = integral_of(B, 0.5, grid, tol);

  FactorPair fp;
  fp.route = RouteKind::DiscriminantConstant;
  fp.c = c;
  fp.k = k;
  fp.g = [half_b, w, w0](double x) { return std::exp((*half_b)(x)) * w(x) / w0; };
  fp.h = [half_b, w, w0](double x) { return std::exp((*half_b)(x)) * w0 / w(x); };
  fp.P = [B, dlog_w](double x) { return 0.5 * evaluate(B, x) + dlog_w(x); };
  fp.Q = [B, dlog_w](double x) { return 0.5 * evaluate(B, x) - dlog_w(x); };
  fp.riccati_shift = [dlog_w](double x) { return -dlog_w(x); };
  return fp;
}

FactorPair factors_from_complementary(const Expr& f, const Expr& B,
                                      const Grid& grid, double tol) {
  const std::vector<Complex> fv =
      kernels::sample([&f](double x) { return evaluate(f, x); }, grid.nodes());
  double fmax = 0.0;
  for (const auto& v : fv) fmax = std::max(fmax, std::abs(v));
  for (std::size_t i = 0; i < fv.size(); ++i) {
    if (std::abs(fv[i]) <= 1e-12 * fmax) throw ZeroOnInterval(grid[i]);
    if (i == 0) continue;
    const double r0 = fv[i - 1].real();
    const double r1 = fv[i].real();
    const bool realish = std::abs(fv[i].imag()) <= 1e-12 * fmax &&
                         std::abs(fv[i - 1].imag()) <= 1e-12 * fmax;
    if (realish && r0 * r1 < 0)
      throw ZeroOnInterval(grid[i - 1] + (grid[i] - grid[i - 1]) * r0 / (r0 - r1));
  }

  const Expr df = differentiate(f);
  auto int_b = integral_of(B, 1.0, grid, tol);
  FactorPair fp;
  fp.route = RouteKind::KnownComplementary;
  fp.g = [f, int_b](double x) { return evaluate(f, x) * std::exp((*int_b)(x)); };
  fp.h = [f](double x) { return 1.0 / evaluate(f, x); };
  fp.Q = [f, df](double x) { return -evaluate(df, x) / evaluate(f, x); };
  fp.P = [f, df, B](double x) {
    return evaluate(B, x) + evaluate(df, x) / evaluate(f, x);
  };
  return fp;
}

FactorPair factors_riccati(const Expr& B, const Expr& C,
                           const RiccatiConfig& cfg, const Grid& grid,
                           double quad_tol) {
  if (!(cfg.blowup > 0)) throw InvalidProblem("Riccati blow-up threshold must be positive");
  const std::size_t n = grid.size();
  const std::size_t anchor = grid.anchor();
  std::vector<Complex> q(n), dq(n);

  auto rhs = [&B, &C](double x, const State<1>& y) -> State<1> {
    return {riccati_rhs(y[0], evaluate(B, x), evaluate(C, x))};
  };
  auto guard = [&cfg](double x, const State<1>& y) {
    if (std::abs(y[0]) > cfg.blowup) throw SingularityDetected(x);
  };
  const StepperOptions opt{cfg.tol, cfg.tol};

  q[anchor] = cfg.q0;
  for (int dir : {+1, -1}) {
    double x = grid[anchor];
    State<1> y{Complex(cfg.q0)};
    double h = 0.0;
    for (std::size_t i = anchor;;) {
      if (dir > 0 ? i + 1 >= n : i == 0) break;
      i = dir > 0 ? i + 1 : i - 1;
      advance<1>(rhs, x, y, grid[i], h, opt, guard);
      q[i] = y[0];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    dq[i] = riccati_rhs(q[i], evaluate(B, grid[i]), evaluate(C, grid[i]));

  auto q_grid = std::make_shared<const GridFunction>(
      std::vector<double>(grid.nodes().begin(), grid.nodes().end()), q, dq);
  auto int_q = std::make_shared<const GridFunction>(
      antiderivative([q_grid](double x) { return (*q_grid)(x); }, grid, quad_tol));
  auto int_b = integral_of(B, 1.0, grid, quad_tol);

  FactorPair fp;
  fp.route = RouteKind::GeneralRiccati;
  fp.riccati_grid = q_grid;
  fp.h = [int_q](double x) { return std::exp((*int_q)(x)); };
  fp.g = [int_q, int_b](double x) { return std::exp((*int_b)(x) - (*int_q)(x)); };
  fp.Q = [q_grid](double x) { return (*q_grid)(x); };
  fp.P = [q_grid, B](double x) { return evaluate(B, x) - (*q_grid)(x); };
  fp.riccati_shift = [q_grid, B](double x) {
    return (*q_grid)(x) - 0.5 * evaluate(B, x);
  };
  return fp;
}

}  // namespace if2ode
