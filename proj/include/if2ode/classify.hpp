#pragma once

#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "if2ode/expr.hpp"
#include "if2ode/grid.hpp"

namespace if2ode {

struct Tolerances {
  double quadrature = 1e-10;
  /// Relative tolerance for constancy of B, C and the discriminant.
  double constant = 1e-9;
  /// Residual bound for a user-supplied complementary solution.
  double complementary_residual = 1e-8;
  double stepper = 1e-10;
};

struct InitialConditions {
  Complex y0;
  Complex yp0;
};

/// y'' + B(x) y' + C(x) y = R(x) on [a, b] with integrals anchored at x0.
class OdeProblem {
 public:
  OdeProblem(Expr B, Expr C, Expr R, Interval iv, double x0,
             std::optional<InitialConditions> ic = std::nullopt,
             std::optional<Expr> complementary = std::nullopt,
             Tolerances tol = {}, std::size_t grid_size = kDefaultGridSize);

  const Expr& B() const noexcept { return B_; }
  const Expr& C() const noexcept { return C_; }
  const Expr& R() const noexcept { return R_; }
  Interval interval() const noexcept { return grid_.interval(); }
  double x0() const noexcept { return grid_.base_point(); }
  const std::optional<InitialConditions>& initial_conditions() const noexcept {
    return ic_;
  }
  const std::optional<Expr>& complementary() const noexcept { return f_; }
  const Tolerances& tolerances() const noexcept { return tol_; }
  const Grid& grid() const noexcept { return grid_; }

  /// Copy with a different right-hand side; everything else is shared.
  OdeProblem with_rhs(Expr R) const;

 private:
  Expr B_, C_, R_;
  Grid grid_;
  std::optional<InitialConditions> ic_;
  std::optional<Expr> f_;
  Tolerances tol_;
};

enum class RouteKind {
  ConstantCoefficients,
  KnownComplementary,
  DiscriminantZero,
  DiscriminantConstant,
  GeneralRiccati,
};

/// Stable machine name, e.g. "discriminant-zero".
std::string_view route_name(RouteKind kind);
/// Human label naming the result the route comes from, e.g. "Corollary 1".
std::string_view route_source(RouteKind kind);
/// Parses the --force-route spelling: constant|cor1|cor2|complementary|riccati.
std::optional<RouteKind> route_from_flag(std::string_view flag);

struct RouteVerdict {
  struct ConstantCoefficients {
    double B;
    double C;
  };
  struct KnownComplementary {
    Expr f;
  };
  struct DiscriminantZero {};
  struct DiscriminantConstant {
    double k;
  };
  struct GeneralRiccati {};

  std::variant<ConstantCoefficients, KnownComplementary, DiscriminantZero,
               DiscriminantConstant, GeneralRiccati>
      route;
  Expr discriminant;
  /// D(x) when it was detected constant.
  std::optional<double> discriminant_value;
  /// D sampled at Chebyshev points, for diagnostics.
  std::vector<double> sample_x;
  std::vector<Complex> sample_values;

  RouteKind kind() const noexcept {
    return static_cast<RouteKind>(route.index());
  }
};

/// simplify(B^2 + 2 B' - 4 C).
Expr discriminant(const Expr& B, const Expr& C);

/// Max |f'' + B f' + C f| over the grid and the scale it is compared against.
struct ComplementaryCheck {
  double residual = 0.0;
  double scale = 1.0;
};
ComplementaryCheck check_complementary(const Expr& f, const OdeProblem& p);

/// Route precedence: constant coefficients, known complementary solution,
/// D = 0, D = 4k constant, general Riccati. k is D / 4.
RouteVerdict classify(const OdeProblem& p);

}  // namespace if2ode
