#include "if2ode/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "if2ode/kernels.hpp"

namespace if2ode {
namespace {

// Kronrod abscissae on [0, 1] of the symmetric 15-point rule; odd indices are
// shared with the 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  Complex value;
  double error;
  int depth;
};

Panel gauss_kronrod(const ScalarFn& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Complex fc = f(center);
  Complex kronrod = kWgk[7] * fc;
  Complex gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Complex sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss), depth};
}

Complex pairwise_sum(std::span<const Complex> v) {
  if (v.size() <= 4) {
    Complex s{};
    for (const auto& z : v) s += z;
    return s;
  }
  const std::size_t mid = v.size() / 2;
  return pairwise_sum(v.first(mid)) + pairwise_sum(v.subspan(mid));
}

}  // namespace

QuadratureResult integrate_detailed(const ScalarFn& f, double a, double b,
                                    double tol, int max_depth) {
  if (a == b) return {};
  if (a > b) {
    QuadratureResult r = integrate_detailed(f, b, a, tol, max_depth);
    r.value = -r.value;
    return r;
  }
  auto worse = [](const Panel& p, const Panel& q) { return p.error < q.error; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> queue(worse);
  std::vector<Panel> done;

  Panel first = gauss_kronrod(f, a, b, 0);
  Complex total = first.value;
  double error = first.error;
  queue.push(first);
  for (;;) {
    if (!std::isfinite(error) || !std::isfinite(std::abs(total)))
      throw ToleranceNotMet(error, tol);
    if (error <= tol * (1.0 + std::abs(total))) break;
    const Panel worst = queue.top();
    if (worst.depth >= max_depth) throw ToleranceNotMet(error, tol);
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
    const Panel right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Recompute the total in a fixed order so it does not depend on the
  // refinement history's rounding.
  while (!queue.empty()) {
    done.push_back(queue.top());
    queue.pop();
  }
  std::sort(done.begin(), done.end(),
            [](const Panel& p, const Panel& q) { return p.a < q.a; });
  std::vector<Complex> values;
  values.reserve(done.size());
  double err_sum = 0.0;
  for (const auto& p : done) {
    values.push_back(p.value);
    err_sum += p.error;
  }
  return {pairwise_sum(values), err_sum, done.size()};
}

Complex integrate(const ScalarFn& f, double a, double b, double tol) {
  return integrate_detailed(f, a, b, tol).value;
}

namespace {

GridFunction assemble_antiderivative(const Grid& grid,
                                     std::vector<Complex> cells,
                                     std::vector<Complex> slopes) {
  std::vector<Complex> values = kernels::anchored_prefix_sum(cells, grid.anchor());
  std::vector<double> xs(grid.nodes().begin(), grid.nodes().end());
  return GridFunction(std::move(xs), std::move(values), std::move(slopes));
}

}  // namespace

GridFunction antiderivative(const ScalarFn& f, const Grid& grid, double tol) {
  auto cells = kernels::cell_integrals(f, grid.nodes(), tol);
  auto slopes = kernels::sample(f, grid.nodes());
  return assemble_antiderivative(grid, std::move(cells), std::move(slopes));
}

GridFunction antiderivative_serial(const ScalarFn& f, const Grid& grid,
                                   double tol) {
  auto cells = kernels::cell_integrals_serial(f, grid.nodes(), tol);
  auto slopes = kernels::sample_serial(f, grid.nodes());
  return assemble_antiderivative(grid, std::move(cells), std::move(slopes));
}

GridFunction antiderivative(const ScalarFn& f, double x0, Interval iv,
                            std::size_t n, double tol) {
  if (n < 33) throw InvalidProblem("antiderivative grid needs at least 33 nodes");
  return antiderivative(f, Grid(iv, x0, n), tol);
}

}  // namespace if2ode
