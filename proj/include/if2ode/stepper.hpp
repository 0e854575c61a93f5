#pragma once

// Adaptive Dormand-Prince 5(4) integrator shared by the Riccati factor route
// and the reference solver. Each caller supplies its own right-hand side.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "if2ode/errors.hpp"

namespace if2ode {

template <std::size_t N>
using State = std::array<Complex, N>;

struct StepperOptions {
  double atol = 1e-10;
  double rtol = 1e-10;
  std::size_t max_steps = 2'000'000;
};

namespace detail {

template <std::size_t N>
State<N> axpy(const State<N>& y, double h,
              std::initializer_list<std::pair<double, const State<N>*>> terms) {
  State<N> out = y;
  for (const auto& [c, k] : terms)
    if (c != 0.0)
      for (std::size_t i = 0; i < N; ++i) out[i] += h * c * (*k)[i];
  return out;
}

template <std::size_t N>
bool finite(const State<N>& y) {
  for (const auto& v : y)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

}  // namespace detail

/// Advances (x, y) to x_end. `h` carries the step-size estimate between calls
/// (0 lets the stepper pick one). `on_step(x, y)` runs after every accepted
/// step and may throw to abort.
template <std::size_t N, typename Rhs, typename OnStep>
void advance(Rhs&& rhs, double& x, State<N>& y, double x_end, double& h,
             const StepperOptions& opt, OnStep&& on_step) {
  using detail::axpy;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                   a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                   a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                   a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                   b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = x_end - x;
  if (span == 0.0) return;
  const double dir = span > 0 ? 1.0 : -1.0;
  double step = h != 0.0 ? std::abs(h) : std::abs(span);
  std::size_t steps = 0;

  while (x != x_end) {
    if (++steps > opt.max_steps) throw StepFailure(x, "too many steps");
    const double remaining = std::abs(x_end - x);
    const bool last = step >= remaining;
    const double hs = dir * (last ? remaining : step);

    const State<N> k1 = rhs(x, y);
    const State<N> k2 = rhs(x + c2 * hs, axpy<N>(y, hs, {{a21, &k1}}));
    const State<N> k3 = rhs(x + c3 * hs, axpy<N>(y, hs, {{a31, &k1}, {a32, &k2}}));
    const State<N> k4 =
        rhs(x + c4 * hs, axpy<N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const State<N> k5 = rhs(
        x + c5 * hs,
        axpy<N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const State<N> k6 =
        rhs(x + hs, axpy<N>(y, hs,
                            {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const State<N> y5 = axpy<N>(
        y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const State<N> k7 = rhs(x + hs, y5);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const Complex e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale =
          opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err = std::max(err, std::abs(e) / scale);
    }
    if (!std::isfinite(err) || !detail::finite(y5)) err = INFINITY;

    if (err <= 1.0) {
      x = last ? x_end : x + hs;
      y = y5;
      on_step(x, y);
      const double grow =
          err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // a clipped final step says nothing about the natural step size
      if (!last || grow < 1.0) step = std::abs(hs) * grow;
    } else {
      const double shrink =
          std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9) : 0.1;
      step = std::abs(hs) * shrink;
    }
    if (step < 1e-14 * std::max(1.0, std::abs(x)))
      throw StepFailure(x, "step size underflow");
  }
  h = dir * step;
}

}  // namespace if2ode
