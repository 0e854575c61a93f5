// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "if2ode/expr.hpp"
#include "if2ode/kernels.hpp"
#include "if2ode/quadrature.hpp"

namespace {

using namespace if2ode;

const Expr kIntegrand = parse("exp(-x^2) * cos(7*x) + sqrt(1 + x^2)");

ScalarFn integrand() {
  return [](double x) { return evaluate(kIntegrand, x); };
}

void BM_SampleSerial(benchmark::State& state) {
  const Grid grid({-2, 2}, 0, static_cast<std::size_t>(state.range(0)));
  const ScalarFn f = integrand();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sample_serial(f, grid.nodes()));
}

void BM_SampleParallel(benchmark::State& state) {
  const Grid grid({-2, 2}, 0, static_cast<std::size_t>(state.range(0)));
  const ScalarFn f = integrand();
  for (auto _ : state) benchmark::DoNotOptimize(kernels::sample(f, grid.nodes()));
  state.counters["threads"] = kernels::thread_count();
}

void BM_AntiderivativeSerial(benchmark::State& state) {
  const Grid grid({-2, 2}, 0, static_cast<std::size_t>(state.range(0)));
  const ScalarFn f = integrand();
  for (auto _ : state) benchmark::DoNotOptimize(antiderivative_serial(f, grid));
}

void BM_AntiderivativeParallel(benchmark::State& state) {
  const Grid grid({-2, 2}, 0, static_cast<std::size_t>(state.range(0)));
  const ScalarFn f = integrand();
  for (auto _ : state) benchmark::DoNotOptimize(antiderivative(f, grid));
  state.counters["threads"] = kernels::thread_count();
}

BENCHMARK(BM_SampleSerial)->Arg(513)->Arg(4097);
BENCHMARK(BM_SampleParallel)->Arg(513)->Arg(4097);
BENCHMARK(BM_AntiderivativeSerial)->Arg(513)->Arg(4097);
BENCHMARK(BM_AntiderivativeParallel)->Arg(513)->Arg(4097);

}  // namespace

BENCHMARK_MAIN();
