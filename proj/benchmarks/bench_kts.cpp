#include <benchmark/benchmark.h>

#include "kts/asymptotics.hpp"
#include "kts/estimators.hpp"
#include "kts/permtest.hpp"
#include "kts/simulation.hpp"
#include "kts/tuner.hpp"

namespace {

using namespace kts;

SampleSet normal_samples(std::size_t nx, std::size_t ny) {
  return draw_samples(Sampler::normal(0.0, 1.0, 2), Sampler::normal(0.2, 1.0, 2), nx, ny, 1, 0);
}

void BM_PooledGram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampleSet s = normal_samples(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(pooled_gram(KernelSpec::gaussian(1.0), s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PooledGram)->RangeMultiplier(2)->Range(64, 1024)->Complexity(benchmark::oNSquared);

void BM_MmdUnbiasedStreaming(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const SampleSet s = normal_samples(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(mmd_unbiased_streaming(KernelSpec::gaussian(1.0), s));
}
BENCHMARK(BM_MmdUnbiasedStreaming)->RangeMultiplier(4)->Range(64, 2048);

void BM_PermutationTest(benchmark::State& state) {
  const auto nx = static_cast<std::size_t>(state.range(0));
  const SampleSet s = normal_samples(nx, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(permutation_test(s, KernelSpec::gaussian(1.0), 0.05, 200, 7));
  }
}
BENCHMARK(BM_PermutationTest)->Arg(50)->Arg(200)->Arg(800);

void BM_NullEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng = make_rng(2, 0);
  const Matrix g = gram_matrix(KernelSpec::gaussian(1.0), Sampler::laplace(0.0, 1.0).sample(n, rng));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_null_eigenvalues(g));
}
BENCHMARK(BM_NullEigenvalues)->Arg(250)->Arg(1000);

void BM_Tune(benchmark::State& state) {
  const TrainingSet train(normal_samples(100, 100));
  const TuneConfig config = default_tune_config();
  for (auto _ : state) benchmark::DoNotOptimize(tune(train, config));
}
BENCHMARK(BM_Tune);

}  // namespace

BENCHMARK_MAIN();
