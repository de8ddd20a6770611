#include "lpreg/instances.hpp"
#include "lpreg/ls_core.hpp"
#include "lpreg/low_precision.hpp"
#include "lpreg/reductions.hpp"
#include "lpreg/refinement.hpp"

#include <benchmark/benchmark.h>

using namespace lpreg;

namespace {

void BM_WeightedLsSolve(benchmark::State& state) {
  const Index n = state.range(0);
  const Index d = n / 2;
  Rng rng(1);
  Matrix A(d, n);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = rng.uniform();
  Vector x0(n), w(n);
  for (Index j = 0; j < n; ++j) {
    x0[j] = rng.uniform();
    w[j] = 0.1 + rng.uniform();
  }
  const Vector b = A * x0;
  WeightedLsSolver solver(A);
  for (auto _ : state) {
    solver.set_weights(w);
    benchmark::DoNotOptimize(solver.solve(b).x);
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_WeightedLsSolve)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_RefineMatrixInstance(benchmark::State& state) {
  const Index rows = state.range(0);
  const GeneralInstance inst =
      gen_random_matrix({rows, rows - 50, 7}, 8.0);
  for (auto _ : state) {
    GeneralSystem sys(inst);
    RefineOptions opts;
    opts.epsilon = 1e-10;
    benchmark::DoNotOptimize(lp_refine(sys, 8.0, opts).objective);
  }
  state.SetComplexityN(rows);
}
BENCHMARK(BM_RefineMatrixInstance)
    ->RangeMultiplier(2)
    ->Range(100, 400)
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_RefineGraphInstance(benchmark::State& state) {
  RandomGraphSpec spec;
  spec.n_nodes = state.range(0);
  spec.n_labeled = 10;
  spec.p = 8.0;
  spec.seed = 3;
  const GeneralInstance inst = gen_random_graph(spec);
  for (auto _ : state) {
    GeneralSystem sys(inst);
    RefineOptions opts;
    opts.epsilon = 1e-10;
    benchmark::DoNotOptimize(lp_refine(sys, 8.0, opts).objective);
  }
}
BENCHMARK(BM_RefineGraphInstance)
    ->Arg(100)
    ->Arg(200)
    ->Unit(benchmark::kMillisecond);

void BM_LowPrecision(benchmark::State& state) {
  const Index n = state.range(0);
  Rng rng(11);
  Matrix A(n / 2, n);
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = rng.uniform();
  Vector x0(n);
  for (Index j = 0; j < n; ++j) x0[j] = rng.uniform();
  const Vector b = A * x0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(l2p_minimization(A, b, 0.1, 2.0).x);
  }
}
BENCHMARK(BM_LowPrecision)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
