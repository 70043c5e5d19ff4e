// Parallel / packed kernels against the serial references they are tested
// against.

#include <benchmark/benchmark.h>

#include "toombound/builtins.hpp"
#include "toombound/dynamics.hpp"
#include "toombound/noisy_ca.hpp"

using namespace toombound;

namespace {

LatticeState start(int size, double p) { return sample_initial({size, size}, Boundary::Torus, p, 1, 0); }

void BM_Closure(benchmark::State& state) {
  const auto f = builtins::dtbp();
  const auto x = start(static_cast<int>(state.range(0)), 0.12);
  for (auto _ : state) benchmark::DoNotOptimize(closure_run(x, f).steps);
}

void BM_ClosureReference(benchmark::State& state) {
  const auto f = builtins::dtbp();
  const auto x = start(static_cast<int>(state.range(0)), 0.12);
  for (auto _ : state) benchmark::DoNotOptimize(closure_reference(x, f).steps);
}

NoisyPlan noisy(int size) {
  NoisyPlan plan;
  plan.p = 0.05;
  plan.size = size;
  plan.steps = 50;
  plan.seed = 3;
  return plan;
}

void BM_NoisyCa(benchmark::State& state) {
  const auto plan = noisy(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(noisy_ca_run(nec_rule(), plan).terminal());
}

void BM_NoisyCaReference(benchmark::State& state) {
  const auto plan = noisy(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(noisy_ca_run_reference(nec_rule(), plan).terminal());
}

SimPlan trials() {
  SimPlan plan;
  plan.p = 0.12;
  plan.trials = 16;
  plan.seed = 5;
  return plan;
}

void BM_Trials(benchmark::State& state) {
  const auto f = builtins::dtbp();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials(f, trials(), {n, n}, Boundary::Torus).size());
}

void BM_TrialsSerial(benchmark::State& state) {
  const auto f = builtins::dtbp();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_trials_serial(f, trials(), {n, n}, Boundary::Torus).size());
}

}  // namespace

BENCHMARK(BM_Closure)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosureReference)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoisyCa)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NoisyCaReference)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Trials)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrialsSerial)->Arg(128)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
