#include "if2ode/classify.hpp"

#include <algorithm>
#include <cmath>

namespace if2ode {

OdeProblem::OdeProblem(Expr B, Expr C, Expr R, Interval iv, double x0,
                       std::optional<InitialConditions> ic,
                       std::optional<Expr> complementary, Tolerances tol,
                       std::size_t grid_size)
    : B_(std::move(B)),
      C_(std::move(C)),
      R_(std::move(R)),
      grid_(iv, x0, grid_size),
      ic_(ic),
      f_(std::move(complementary)),
      tol_(tol) {
  const std::pair<const char*, const Expr*> coefficients[] = {
      {"B", &B_}, {"C", &C_}, {"R", &R_}};
  for (const auto& [name, e] : coefficients) {
    for (double x : grid_.nodes()) {
      const Complex v = evaluate(*e, x);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError(std::string("coefficient ") + name + " is not finite",
                          x);
    }
  }
}

OdeProblem OdeProblem::with_rhs(Expr R) const {
  OdeProblem copy = *this;
  copy.R_ = std::move(R);
  for (double x : grid_.nodes()) evaluate(copy.R_, x);
  return copy;
}

std::string_view route_name(RouteKind kind) {
  switch (kind) {
    case RouteKind::ConstantCoefficients: return "constant-coefficients";
    case RouteKind::KnownComplementary: return "known-complementary";
    case RouteKind::DiscriminantZero: return "discriminant-zero";
    case RouteKind::DiscriminantConstant: return "discriminant-constant";
    case RouteKind::GeneralRiccati: return "general-riccati";
  }
  return "?";
}

std::string_view route_source(RouteKind kind) {
  switch (kind) {
    case RouteKind::ConstantCoefficients: return "Corollary 3";
    case RouteKind::KnownComplementary: return "Corollary 4";
    case RouteKind::DiscriminantZero: return "Corollary 1";
    case RouteKind::DiscriminantConstant: return "Corollary 2";
    case RouteKind::GeneralRiccati: return "Theorem 1";
  }
  return "?";
}

std::optional<RouteKind> route_from_flag(std::string_view flag) {
  if (flag == "constant") return RouteKind::ConstantCoefficients;
  if (flag == "complementary") return RouteKind::KnownComplementary;
  if (flag == "cor1") return RouteKind::DiscriminantZero;
  if (flag == "cor2") return RouteKind::DiscriminantConstant;
  if (flag == "riccati") return RouteKind::GeneralRiccati;
  return std::nullopt;
}

Expr discriminant(const Expr& B, const Expr& C) {
  using E = Expr;
  const Expr b2 = E::pow(B, E::constant(2));
  const Expr db = E::mul(E::constant(2), differentiate(B));
  return simplify(E::sub(E::add(b2, db), E::mul(E::constant(4), C)));
}

ComplementaryCheck check_complementary(const Expr& f, const OdeProblem& p) {
  const Expr df = differentiate(f);
  const Expr d2f = differentiate(df);
  ComplementaryCheck check;
  double scale = 0.0;
  for (double x : p.grid().nodes()) {
    const Complex fv = evaluate(f, x);
    const Complex d1 = evaluate(df, x);
    const Complex d2 = evaluate(d2f, x);
    const Complex bt = evaluate(p.B(), x) * d1;
    const Complex ct = evaluate(p.C(), x) * fv;
    check.residual = std::max(check.residual, std::abs(d2 + bt + ct));
    scale = std::max(scale, std::abs(d2) + std::abs(bt) + std::abs(ct));
  }
  check.scale = 1.0 + scale;
  return check;
}

RouteVerdict classify(const OdeProblem& p) {
  const Interval iv = p.interval();
  const double tol = p.tolerances().constant;
  RouteVerdict verdict{RouteVerdict::GeneralRiccati{}, discriminant(p.B(), p.C()),
                       std::nullopt, {}, {}};

  const ConstancySamples d_samples = sample_chebyshev(verdict.discriminant, iv);
  verdict.sample_x = d_samples.x;
  verdict.sample_values = d_samples.values;
  const auto d_const = detect_constant(verdict.discriminant, iv, tol);
  verdict.discriminant_value = d_const;

  const auto b_const = detect_constant(p.B(), iv, tol);
  const auto c_const = detect_constant(p.C(), iv, tol);
  if (b_const && c_const) {
    verdict.route = RouteVerdict::ConstantCoefficients{*b_const, *c_const};
    return verdict;
  }

  if (p.complementary()) {
    const ComplementaryCheck check = check_complementary(*p.complementary(), p);
    const double bound = p.tolerances().complementary_residual * check.scale;
    if (check.residual > bound) throw InvalidComplementary(check.residual, bound);
    verdict.route = RouteVerdict::KnownComplementary{*p.complementary()};
    return verdict;
  }

  if (d_const) {
    // scale of the terms that cancel in D
    const Expr db = differentiate(p.B());
    double scale = 0.0;
    for (double x : d_samples.x) {
      const double b = std::abs(evaluate(p.B(), x));
      scale = std::max(scale, b * b + 2.0 * std::abs(evaluate(db, x)) +
                                  4.0 * std::abs(evaluate(p.C(), x)));
    }
    if (std::abs(*d_const) <= tol * (1.0 + scale)) {
      verdict.route = RouteVerdict::DiscriminantZero{};
    } else {
      verdict.route = RouteVerdict::DiscriminantConstant{*d_const / 4.0};
    }
    return verdict;
  }
  return verdict;
}

}  // namespace if2ode
