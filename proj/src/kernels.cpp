#include "if2ode/kernels.hpp"

#include <exception>

#include "if2ode/quadrature.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace if2ode::kernels {
namespace {

// Exceptions cannot leave an OpenMP region; the lowest failing index wins so
// the reported error does not depend on scheduling.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<Complex> sample(const ScalarFn& f, std::span<const double> xs) {
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
  std::vector<Complex> out(xs.size());
  std::vector<std::exception_ptr> errors(xs.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[i] = f(xs[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

std::vector<Complex> sample_serial(const ScalarFn& f,
                                   std::span<const double> xs) {
  std::vector<Complex> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(f(x));
  return out;
}

std::vector<Complex> cell_integrals(const ScalarFn& f,
                                    std::span<const double> xs, double tol) {
  if (xs.size() < 2) return {};
  const auto cells = static_cast<std::ptrdiff_t>(xs.size() - 1);
  std::vector<Complex> out(xs.size() - 1);
  std::vector<std::exception_ptr> errors(xs.size() - 1);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < cells; ++i) {
    try {
      out[i] = integrate(f, xs[i], xs[i + 1], tol);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  rethrow_first(errors);
  return out;
}

std::vector<Complex> cell_integrals_serial(const ScalarFn& f,
                                           std::span<const double> xs,
                                           double tol) {
  std::vector<Complex> out;
  if (xs.size() < 2) return out;
  out.reserve(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    out.push_back(integrate(f, xs[i], xs[i + 1], tol));
  return out;
}

std::vector<Complex> anchored_prefix_sum(std::span<const Complex> cells,
                                         std::size_t anchor) {
  std::vector<Complex> out(cells.size() + 1);
  out[anchor] = 0.0;
  for (std::size_t i = anchor; i < cells.size(); ++i) out[i + 1] = out[i] + cells[i];
  for (std::size_t i = anchor; i > 0; --i) out[i - 1] = out[i] - cells[i - 1];
  return out;
}

}  // namespace if2ode::kernels
