#pragma once

// Data-parallel inner loops of the solver. Each kernel has an OpenMP version
// and a serial reference with identical per-element arithmetic; results are
// bitwise equal regardless of thread count.

#include <span>
#include <vector>

#include "if2ode/grid.hpp"

namespace if2ode::kernels {

/// f at every abscissa.
std::vector<Complex> sample(const ScalarFn& f, std::span<const double> xs);
std::vector<Complex> sample_serial(const ScalarFn& f,
                                   std::span<const double> xs);

/// Integral of f over each cell [xs[i], xs[i+1]] by adaptive Gauss-Kronrod.
std::vector<Complex> cell_integrals(const ScalarFn& f,
                                    std::span<const double> xs, double tol);
std::vector<Complex> cell_integrals_serial(const ScalarFn& f,
                                           std::span<const double> xs,
                                           double tol);

/// Running sums of cell integrals outward from node `anchor`, which gets an
/// exact zero. Serial: the sum order fixes the result.
std::vector<Complex> anchored_prefix_sum(std::span<const Complex> cells,
                                         std::size_t anchor);

/// Number of threads the parallel kernels will use.
int thread_count();

}  // namespace if2ode::kernels
