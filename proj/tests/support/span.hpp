#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "if2ode/grid.hpp"

namespace if2ode::testing {

/// Max deviation of t from its least-squares fit by alpha u + beta v on the
/// grid, relative to max |t|.
inline double span_error(const ScalarFn& u, const ScalarFn& v,
                         const std::function<double(double)>& t, const Grid& grid) {
  Complex uu{}, uv{}, vv{}, ut{}, vt{};
  for (double x : grid.nodes()) {
    const Complex a = u(x), b = v(x);
    const double c = t(x);
    uu += std::conj(a) * a;
    uv += std::conj(a) * b;
    vv += std::conj(b) * b;
    ut += std::conj(a) * c;
    vt += std::conj(b) * c;
  }
  const Complex det = uu * vv - std::conj(uv) * uv;
  const Complex alpha = (ut * vv - uv * vt) / det;
  const Complex beta = (uu * vt - std::conj(uv) * ut) / det;
  double worst = 0.0, scale = 0.0;
  for (double x : grid.nodes()) {
    worst = std::max(worst, std::abs(alpha * u(x) + beta * v(x) - t(x)));
    scale = std::max(scale, std::abs(t(x)));
  }
  return worst / scale;
}

}  // namespace if2ode::testing
