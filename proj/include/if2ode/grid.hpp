#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "if2ode/errors.hpp"
#include "if2ode/expr.hpp"

namespace if2ode {

/// Complex-valued function of the real independent variable.
using ScalarFn = std::function<Complex(double)>;

inline constexpr std::size_t kDefaultGridSize = 513;

/// Sample abscissae shared by every stage of a solve. Uniform on [a, b],
/// or uniform on each side when the base point is interior, so that the base
/// point is always a node.
class Grid {
 public:
  Grid(Interval iv, double x0, std::size_t n = kDefaultGridSize);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  Interval interval() const noexcept { return {nodes_.front(), nodes_.back()}; }
  double base_point() const noexcept { return nodes_[anchor_]; }
  /// Index of the base point.
  std::size_t anchor() const noexcept { return anchor_; }

 private:
  std::vector<double> nodes_;
  std::size_t anchor_ = 0;
};

/// Samples on strictly increasing abscissae with a cubic interpolant:
/// Hermite when slopes are stored, four-point Lagrange otherwise.
class GridFunction {
 public:
  /// Empty placeholder; not evaluable.
  GridFunction() = default;
  GridFunction(std::vector<double> x, std::vector<Complex> values,
               std::vector<Complex> slopes = {});

  Complex operator()(double x) const { return value_at(x); }
  Complex value_at(double x) const;
  /// Derivative of the interpolant.
  Complex slope_at(double x) const;

  std::span<const double> abscissae() const noexcept { return x_; }
  std::span<const Complex> values() const noexcept { return v_; }
  std::span<const Complex> slopes() const noexcept { return s_; }
  bool has_slopes() const noexcept { return !s_.empty(); }
  std::size_t size() const noexcept { return x_.size(); }
  Interval interval() const noexcept { return {x_.front(), x_.back()}; }
  /// Width of the cell containing x; at a node, the smaller adjacent cell.
  double local_spacing(double x) const;

 private:
  std::size_t cell_of(double x) const;

  std::vector<double> x_;
  std::vector<Complex> v_;
  std::vector<Complex> s_;
};

GridFunction sample(const ScalarFn& f, const Grid& grid);

/// Fourth-order central difference of the interpolant of F at x, with the
/// stencil step equal to the local grid spacing.
Complex finite_diff(const GridFunction& F, double x);

}  // namespace if2ode
