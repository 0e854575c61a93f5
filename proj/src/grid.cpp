#include "if2ode/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "if2ode/kernels.hpp"

namespace if2ode {

Grid::Grid(Interval iv, double x0, std::size_t n) {
  if (!(iv.a < iv.b)) throw InvalidProblem("interval must satisfy a < b");
  if (!iv.contains(x0)) throw InvalidProblem("base point must lie in [a, b]");
  if (n < 2) throw InvalidProblem("grid needs at least two nodes");
  nodes_.resize(n);
  auto fill = [&](std::size_t first, std::size_t last, double lo, double hi) {
    const std::size_t cells = last - first;
    for (std::size_t i = 0; i <= cells; ++i)
      nodes_[first + i] = lo + (hi - lo) * static_cast<double>(i) /
                                    static_cast<double>(cells);
    nodes_[last] = hi;
  };
  if (x0 == iv.a || x0 == iv.b || n < 3) {
    fill(0, n - 1, iv.a, iv.b);
    anchor_ = x0 == iv.b ? n - 1 : 0;
    if (x0 != iv.a && x0 != iv.b) throw InvalidProblem("grid too small");
    return;
  }
  const double frac = (x0 - iv.a) / iv.length();
  auto left = static_cast<std::size_t>(std::lround(frac * static_cast<double>(n - 1)));
  left = std::clamp<std::size_t>(left, 1, n - 2);
  fill(0, left, iv.a, x0);
  fill(left, n - 1, x0, iv.b);
  anchor_ = left;
}

GridFunction::GridFunction(std::vector<double> x, std::vector<Complex> values,
                           std::vector<Complex> slopes)
    : x_(std::move(x)), v_(std::move(values)), s_(std::move(slopes)) {
  if (x_.size() < 2 || v_.size() != x_.size())
    throw InvalidProblem("grid function needs at least two matching samples");
  if (!s_.empty() && s_.size() != x_.size())
    throw InvalidProblem("grid function slopes do not match samples");
  for (std::size_t i = 1; i < x_.size(); ++i)
    if (!(x_[i] > x_[i - 1]))
      throw InvalidProblem("grid abscissae must be strictly increasing");
}

std::size_t GridFunction::cell_of(double x) const {
  if (x_.size() < 2) throw OutOfRange("empty grid function");
  const double a = x_.front();
  const double b = x_.back();
  const double slack = 1e-12 * (b - a);
  if (x < a - slack || x > b + slack)
    throw OutOfRange("x = " + std::to_string(x) + " outside [" +
                     std::to_string(a) + ", " + std::to_string(b) + "]");
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - x_.begin() - 1, 0));
  return std::min(i, x_.size() - 2);
}

namespace {

// Lagrange interpolation (value and derivative) through points [first, first+m).
std::pair<Complex, Complex> lagrange(std::span<const double> xs,
                                     std::span<const Complex> vs,
                                     std::size_t first, std::size_t m,
                                     double x) {
  Complex value{}, deriv{};
  for (std::size_t j = first; j < first + m; ++j) {
    double lj = 1.0;
    double dlj = 0.0;
    for (std::size_t k = first; k < first + m; ++k) {
      if (k == j) continue;
      const double denom = xs[j] - xs[k];
      dlj = dlj * (x - xs[k]) / denom + lj / denom;
      lj *= (x - xs[k]) / denom;
    }
    value += lj * vs[j];
    deriv += dlj * vs[j];
  }
  return {value, deriv};
}

}  // namespace

Complex GridFunction::value_at(double x) const {
  const std::size_t i = cell_of(x);
  if (x == x_[i]) return v_[i];
  if (x == x_[i + 1]) return v_[i + 1];
  if (has_slopes()) {
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v_[i] + (t3 - 2 * t2 + t) * h * s_[i] +
           (-2 * t3 + 3 * t2) * v_[i + 1] + (t3 - t2) * h * s_[i + 1];
  }
  const std::size_t m = std::min<std::size_t>(4, x_.size());
  const std::size_t first = std::min(i > 0 ? i - 1 : 0, x_.size() - m);
  return lagrange(x_, v_, first, m, x).first;
}

Complex GridFunction::slope_at(double x) const {
  const std::size_t i = cell_of(x);
  if (has_slopes()) {
    if (x == x_[i]) return s_[i];
    if (x == x_[i + 1]) return s_[i + 1];
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * v_[i] + (-6 * t2 + 6 * t) * v_[i + 1]) / h +
           (3 * t2 - 4 * t + 1) * s_[i] + (3 * t2 - 2 * t) * s_[i + 1];
  }
  const std::size_t m = std::min<std::size_t>(4, x_.size());
  const std::size_t first = std::min(i > 0 ? i - 1 : 0, x_.size() - m);
  return lagrange(x_, v_, first, m, x).second;
}

double GridFunction::local_spacing(double x) const {
  const std::size_t i = cell_of(x);
  double h = x_[i + 1] - x_[i];
  if (x == x_[i] && i > 0) h = std::min(h, x_[i] - x_[i - 1]);
  if (x == x_[i + 1] && i + 2 < x_.size()) h = std::min(h, x_[i + 2] - x_[i + 1]);
  return h;
}

GridFunction sample(const ScalarFn& f, const Grid& grid) {
  std::vector<double> xs(grid.nodes().begin(), grid.nodes().end());
  std::vector<Complex> vs = kernels::sample(f, grid.nodes());
  return GridFunction(std::move(xs), std::move(vs));
}

Complex finite_diff(const GridFunction& F, double x) {
  const double h = F.local_spacing(x);
  const Interval iv = F.interval();
  const double slack = 1e-9 * h;
  if (x - 2 * h < iv.a - slack || x + 2 * h > iv.b + slack)
    throw OutOfRange("finite-difference stencil at x = " + std::to_string(x) +
                     " leaves the grid");
  const double lo2 = std::max(iv.a, x - 2 * h);
  const double hi2 = std::min(iv.b, x + 2 * h);
  return (-F(hi2) + 8.0 * F(x + h) - 8.0 * F(x - h) + F(lo2)) / (12.0 * h);
}

}  // namespace if2ode
