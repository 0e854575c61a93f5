// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "if2ode/errors.hpp"
#include "if2ode/factors.hpp"
#include "if2ode/solver.hpp"
#include "if2ode/verify.hpp"
#include "support/problems.hpp"
#include "support/random_expr.hpp"

namespace {

using namespace if2ode;
using testing::make;
using testing::ProblemSpec;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what, double value, double bound) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << '=' << value << (ok ? " <= " : " > ") << bound;
  }
  void require_more(bool ok, const std::string& what, double value, double bound) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << '=' << value << (ok ? " > " : " <= ") << bound;
  }
  void require_true(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? " ok" : " FAILED");
  }
};

double max_gap(const std::vector<double>& xs, const std::vector<Complex>& ys,
               const std::function<double(double)>& exact) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    worst = std::max(worst, std::abs(ys[i] - exact(xs[i])));
  return worst;
}

double max_y(const SolveReport& r) {
  double m = 0.0;
  for (const auto& v : r.y) m = std::max(m, std::abs(v));
  return m;
}

double formula_residual(const Solution& s, const FactorPair& fp, const OdeProblem& p) {
  return max_abs(residual([&](double x) { return s.value(x); },
                          [&](double x) { return derivative_of_solution(s, fp, x); }, p));
}

// 1. General Riccati route against the closed form and the reference integrator.
Outcome general_riccati_route() {
  Outcome o;
  const OdeProblem p = make({.B = "x", .C = "1", .a = 0, .b = 1, .ic = {{1, 0}}});
  const SolveReport r = solve(p, {.riccati = {.q0 = 0}});
  o.require_true(r.used == RouteKind::GeneralRiccati, "route general-riccati");
  const double exact = max_gap(r.x, r.y, [](double x) { return std::exp(-x * x / 2); });
  o.require(exact <= 1e-5, "err_exact", exact, 1e-5);
  const double ref = r.metrics.max_abs_error.value_or(INFINITY);
  o.require(ref <= 1e-5, "err_reference", ref, 1e-5);
  o.require(r.metrics.max_residual <= 1e-5, "residual", r.metrics.max_residual, 1e-5);
  return o;
}

// 2. D = 0 route.
Outcome discriminant_zero_route() {
  Outcome o;
  const OdeProblem p = make({.B = "2*x", .C = "x^2+1", .a = 0, .b = 2, .ic = {{1, 0}}});
  o.require_true(classify(p).kind() == RouteKind::DiscriminantZero, "classified discriminant-zero");
  const SolveReport r = solve(p);
  o.require_true(r.used == RouteKind::DiscriminantZero, "route used");
  const double err = max_gap(r.x, r.y, [](double x) { return std::exp(-x * x / 2); });
  o.require(err <= 1e-6, "err_exact", err, 1e-6);
  return o;
}

// 3. Constant D route with k = D/4, and the k = D reading as a negative control.
Outcome discriminant_constant_route() {
  Outcome o;
  const OdeProblem p = make({.B = "2*x", .C = "x^2", .a = 0, .b = 2, .ic = {{1, 1}}});
  const RouteVerdict v = classify(p);
  o.require_true(v.kind() == RouteKind::DiscriminantConstant, "classified discriminant-constant");
  const SolveReport r = solve(p);
  o.require_true(r.used == RouteKind::DiscriminantConstant && r.factors.k &&
                     std::abs(*r.factors.k - 1.0) < 1e-12,
                 "k = D/4 = 1");
  const double err = max_gap(r.x, r.y, [](double x) { return std::exp(-x * x / 2 + x); });
  o.require(err <= 1e-6, "err_exact", err, 1e-6);

  const double D = v.discriminant_value.value_or(0.0);
  const FactorPair wrong = factors_discriminant_const(p.B(), D, p.grid());
  Solution s = assemble_general(wrong, p.R(), p.grid());
  s.constants = apply_initial_conditions(s, wrong, 1.0, 1.0, p.x0());
  const double res = formula_residual(s, wrong, p);
  o.require_more(res > 1e-2, "residual_with_k=D", res, 1e-2);
  return o;
}

// 4. Constant coefficients: distinct, repeated and complex roots.
Outcome constant_route() {
  Outcome o;
  const SolveReport a = solve(make({.B = "3", .C = "2", .a = 0, .b = 2, .ic = {{1, -1}}}));
  const double ea = max_gap(a.x, a.y, [](double x) { return std::exp(-x); });
  o.require(ea <= 1e-8, "err_distinct", ea, 1e-8);

  const SolveReport b = solve(make({.B = "2", .C = "1", .a = 0, .b = 2, .ic = {{0, 1}}}));
  const double eb = max_gap(b.x, b.y, [](double x) { return x * std::exp(-x); });
  o.require(eb <= 1e-7, "err_repeated", eb, 1e-7);

  const SolveReport c = solve(make({.B = "0", .C = "1", .a = 0, .b = 2, .ic = {{0, 1}}}));
  o.require_true(a.used == RouteKind::ConstantCoefficients &&
                     b.used == RouteKind::ConstantCoefficients &&
                     c.used == RouteKind::ConstantCoefficients,
                 "route constant-coefficients");
  o.require_true(c.real_output, "real output");
  const double ec = max_gap(c.x, c.y, [](double x) { return std::sin(x); });
  o.require(ec <= 1e-7, "err_complex", ec, 1e-7);
  o.require(c.metrics.imag_residue <= 1e-8, "imag_residue", c.metrics.imag_residue, 1e-8);
  return o;
}

// 5. Known complementary solution.
Outcome complementary_route() {
  Outcome o;
  const SolveReport r = solve(
      make({.B = "-2/x", .C = "2/x^2", .a = 1, .b = 3, .ic = {{1, 2}}, .f = "x"}));
  o.require_true(r.used == RouteKind::KnownComplementary, "route known-complementary");
  const double err = max_gap(r.x, r.y, [](double x) { return x * x; });
  o.require(err <= 1e-6, "err_exact", err, 1e-6);
  return o;
}

// 6. Non-homogeneous equation and superposition.
Outcome nonhomogeneous() {
  Outcome o;
  const OdeProblem p = make({.B = "0", .C = "-1", .R = "x", .a = 0, .b = 2, .ic = {{0, 0}}});
  auto exact = [](double x) { return std::sinh(x) - x; };
  for (const auto& [label, route] :
       {std::pair<const char*, RouteKind>{"classified", classify(p).kind()},
        {"riccati", RouteKind::GeneralRiccati}}) {
    const SolveReport r = solve(p, {.force_route = route});
    const double e = max_gap(r.x, r.y, exact);
    o.require(e <= 1e-6, std::string("err_exact_") + label, e, 1e-6);
    const double ref = r.metrics.max_abs_error.value_or(INFINITY);
    o.require(ref <= 1e-6, std::string("err_reference_") + label, ref, 1e-6);
  }
  const OdeProblem hom = make({.B = "0", .C = "-1", .a = 0, .b = 2});
  const Expr r1 = parse("x"), r2 = parse("exp(x)");
  const Solution s1 = solve(hom.with_rhs(r1)).solution;
  const Solution s2 = solve(hom.with_rhs(r2)).solution;
  const Solution s12 = solve(hom.with_rhs(Expr::add(r1, r2))).solution;
  double worst = 0.0;
  for (double x : hom.grid().nodes())
    worst = std::max(worst, std::abs(s12.particular(x) - s1.particular(x) - s2.particular(x)));
  o.require(worst <= 1e-7, "superposition", worst, 1e-7);
  return o;
}

struct RouteCase {
  ProblemSpec spec;
  RouteKind route;
  double q0 = 0.0;
};

// 7. Factor conditions on every route, plus corruption detection.
Outcome factor_conditions() {
  Outcome o;
  const std::vector<RouteCase> corpus{
      {{.B = "3", .C = "2", .b = 2}, RouteKind::ConstantCoefficients},
      {{.B = "2", .C = "1", .b = 2}, RouteKind::ConstantCoefficients},
      {{.B = "0", .C = "1", .b = 2}, RouteKind::ConstantCoefficients},
      {{.B = "-2/x", .C = "2/x^2", .a = 1, .b = 3, .f = "x"}, RouteKind::KnownComplementary},
      {{.B = "2*x", .C = "x^2+1", .b = 2}, RouteKind::DiscriminantZero},
      {{.B = "2*x", .C = "x^2", .b = 2}, RouteKind::DiscriminantConstant},
      {{.B = "0", .C = "1", .b = 1}, RouteKind::DiscriminantConstant},
      {{.B = "x", .C = "1", .b = 1}, RouteKind::GeneralRiccati},
      {{.B = "0", .C = "-1", .b = 2, .x0 = 1}, RouteKind::GeneralRiccati, 0.5},
  };
  double worst_defect = 0.0, worst_gh = 0.0;
  for (const auto& rc : corpus) {
    const OdeProblem p = make(rc.spec);
    const FactorPair fp = build_factors(p, classify(p), rc.route, {.q0 = rc.q0});
    for (double d : check_factor_conditions(fp, p)) worst_defect = std::max(worst_defect, d);
    worst_gh = std::max(worst_gh, check_gh_invariant(fp, p));
  }
  o.require(worst_defect <= 1e-6, "max_defect", worst_defect, 1e-6);
  o.require(worst_gh <= 1e-8, "max_gh", worst_gh, 1e-8);

  const OdeProblem p = make({.B = "3", .C = "2", .b = 2});
  FactorPair bad = factors_constant(3, 2, 0);
  bad.h = [h = bad.h](double x) { return h(x) * (1 + 1e-3 * x); };
  const double hd = check_factor_conditions(bad, p)[2];
  o.require_more(hd > 10 * 1e-6, "corrupted_h_defect", hd, 10 * 1e-6);
  const double gh = check_gh_invariant(bad, p);
  o.require_more(gh > 10 * 1e-8, "corrupted_gh", gh, 10 * 1e-8);
  return o;
}

// 8. Zero forcing leaves no particular part.
Outcome homogeneous_collapse() {
  Outcome o;
  std::mt19937_64 rng(29);
  auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  auto lit = [](double v) { return Expr::constant(std::abs(v)); };
  auto signed_lit = [&](double v) { return v < 0 ? Expr::neg(lit(v)) : lit(v); };
  double worst = 0.0;
  std::vector<int> routes(5, 0);
  for (int i = 0; i < 10; ++i) {
    const Expr B = Expr::add(signed_lit(u(-2, 2)), Expr::mul(signed_lit(u(-1, 1)), Expr::variable()));
    Expr C;
    switch (i % 4) {
      case 0: C = signed_lit(u(-2, 2)); break;
      case 1: {
        const Expr B2 = Expr::pow(B, Expr::constant(2));
        C = Expr::div(Expr::add(B2, Expr::mul(Expr::constant(2), differentiate(B))),
                      Expr::constant(4));
        break;
      }
      case 2: {
        const Expr B2 = Expr::pow(B, Expr::constant(2));
        C = Expr::sub(Expr::div(Expr::add(B2, Expr::mul(Expr::constant(2), differentiate(B))),
                                Expr::constant(4)),
                      signed_lit(u(0.2, 1.5)));
        break;
      }
      default: C = Expr::call(Func::Cos, Expr::mul(signed_lit(u(-1, 1)), Expr::variable()));
    }
    const OdeProblem p(i % 4 == 0 ? Expr::constant(u(0, 2)) : B, C, Expr::constant(0),
                       {0, 1}, 0, InitialConditions{u(-1, 1), u(-1, 1)});
    const SolveReport r = solve(p);
    ++routes[static_cast<int>(r.used)];
    for (const auto& v : r.solution.particular.values()) worst = std::max(worst, std::abs(v));
  }
  o.require(worst <= 1e-12, "max_particular", worst, 1e-12);
  std::ostringstream mix;
  mix << "routes";
  for (int n : routes) mix << ' ' << n;
  o.require_true(true, mix.str());
  return o;
}

// 9. Riccati pole detection and recovery.
Outcome riccati_blowup() {
  Outcome o;
  const OdeProblem p = make({.B = "0", .C = "1", .a = 0, .b = 2, .ic = {{0, 1}}});
  bool detected = false;
  try {
    solve(p, {.force_route = RouteKind::GeneralRiccati, .riccati = {.q0 = 0}});
  } catch (const SingularityDetected& e) {
    detected = true;
    const double off = std::abs(e.x() - M_PI / 2);
    o.require(off <= 0.05, "pole_offset", off, 0.05);
  }
  o.require_true(detected, "SingularityDetected raised");
  const SolveReport r = solve(p, {.force_route = RouteKind::ConstantCoefficients});
  o.require_true(r.real_output, "retry real output");
  const double err = max_gap(r.x, r.y, [](double x) { return std::sin(x); });
  o.require(err <= 1e-7, "retry_err", err, 1e-7);
  return o;
}

// 10. Expression layer properties.
Outcome expression_layer() {
  Outcome o;
  testing::ExprGenerator gen(10);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const Expr e = gen.any(5);
    if (!(parse(print(e)) == e)) ++mismatches;
  }
  o.require(mismatches == 0, "roundtrip_mismatches", mismatches, 0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Expr e = gen.smooth(4);
    const Expr d = differentiate(e);
    for (int j = 0; j < 20; ++j) {
      const double x = gen.uniform(-2, 2), h = 1e-5;
      const Complex fd = (evaluate(e, x + h) - evaluate(e, x - h)) / (2 * h);
      const Complex exact = evaluate(d, x);
      worst = std::max(worst, std::abs(exact - fd) / (1 + std::abs(exact)));
    }
  }
  o.require(worst <= 1e-5, "derivative_rel_err", worst, 1e-5);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"general Riccati route, y''+xy'+y=0", general_riccati_route},
      {"discriminant-zero route, y''+2xy'+(x^2+1)y=0", discriminant_zero_route},
      {"constant-discriminant route with k=D/4", discriminant_constant_route},
      {"constant-coefficient route, three root types", constant_route},
      {"known complementary solution, f=x", complementary_route},
      {"non-homogeneous y''-y=x and superposition", nonhomogeneous},
      {"factor conditions on every route, negative control", factor_conditions},
      {"homogeneous collapse over 10 random problems", homogeneous_collapse},
      {"Riccati blow-up detection and retry", riccati_blowup},
      {"expression round trip and derivatives", expression_layer},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu  %s  [%s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.str().c_str());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/%zu criteria passed in %.2f s\n", criteria.size() - failed, criteria.size(),
              secs);
  return failed == 0 ? 0 : 1;
}
