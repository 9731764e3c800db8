#include <benchmark/benchmark.h>

#include "minkit/channels.hpp"
#include "minkit/min.hpp"

using namespace minkit;

static void BM_TraceNormHermitian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix m = random_density({n, 1}, n, 1).matrix() - identity(n) / n;
  for (auto _ : state) benchmark::DoNotOptimize(trace_norm(m));
}
BENCHMARK(BM_TraceNormHermitian)->Arg(4)->Arg(16)->Arg(64);

static void BM_Canonicalize(benchmark::State& state) {
  const DensityMatrix rho = random_density({2, 2}, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(rho));
}
BENCHMARK(BM_Canonicalize);

static void BM_N1TwoQubitClosed(benchmark::State& state) {
  const DensityMatrix rho = random_density({2, 2}, 3, 3);
  for (auto _ : state) benchmark::DoNotOptimize(n1_two_qubit(rho));
}
BENCHMARK(BM_N1TwoQubitClosed);

static void BM_N1SphereSearch(benchmark::State& state) {
  const DensityMatrix rho = make_bell_diagonal(Vec3(0.45, 0.3, 0.2));
  OptimizerConfig cfg;
  cfg.sphere_grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(n1_numeric(rho, cfg));
}
BENCHMARK(BM_N1SphereSearch)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_N1BlockSearch(benchmark::State& state) {
  ComplexVector v = ComplexVector::Zero(9);
  v(0) = std::sqrt(0.5);
  v(4) = v(8) = 0.5;
  const DensityMatrix rho = PureState(v, {3, 3}).density();
  for (auto _ : state) benchmark::DoNotOptimize(n1_numeric(rho));
}
BENCHMARK(BM_N1BlockSearch)->Unit(benchmark::kMillisecond);

static void BM_MonotonicityAudit(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(monotonicity_audit(10, 4, 42));
}
BENCHMARK(BM_MonotonicityAudit)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
