#include <benchmark/benchmark.h>

#include "uadam/kernels.hpp"

namespace {

using namespace uadam;

const ParamVector kGrad{1.0, -2.0, 0.5, 3.0};
const ParamVector kMomentum{0.2, 0.1, -0.4, 1.0};
const NoiseModel kNoise{1.0, 1.0, 11, 0};

template <auto Kernel>
void BM_Lemma1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(kMomentum, kGrad, 0.9, kNoise, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_Noise(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(kGrad, kNoise, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <auto Kernel>
void BM_BoundSweep(benchmark::State& state) {
  kernels::BoundSweepSpec spec;
  spec.rule = AdamParams{};
  spec.streams = static_cast<std::size_t>(state.range(0));
  spec.length = 100;
  spec.grad_bound = 5.0;
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(spec));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}

BENCHMARK(BM_Lemma1<kernels::serial::lemma1_moments>)->Name("lemma1/serial")->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK(BM_Lemma1<kernels::omp::lemma1_moments>)->Name("lemma1/omp")->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK(BM_Noise<kernels::serial::noise_moments>)->Name("noise/serial")->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK(BM_Noise<kernels::omp::noise_moments>)->Name("noise/omp")->Arg(1 << 16)->Arg(1 << 18);
BENCHMARK(BM_BoundSweep<kernels::serial::bound_sweep>)->Name("bound_sweep/serial")->Arg(1000);
BENCHMARK(BM_BoundSweep<kernels::omp::bound_sweep>)->Name("bound_sweep/omp")->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
