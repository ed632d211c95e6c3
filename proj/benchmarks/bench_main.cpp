#include <benchmark/benchmark.h>

#include "sscomp/levy.hpp"
#include "sscomp/stochastic.hpp"
#include "sscomp/verify.hpp"

using namespace sscomp;
using R = Rational;

static void BM_Enumerate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_compositions(n));
}
BENCHMARK(BM_Enumerate)->DenseRange(8, 16, 4);

static void BM_ExactNormalization(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto cpf = markov_cpf(two_param_stationary_pair(R(1, 2), R(1), n));
  for (auto _ : state) benchmark::DoNotOptimize(check_normalization(cpf, n));
}
BENCHMARK(BM_ExactNormalization)->Arg(6)->Arg(8)->Arg(10);

static void BM_ExactRightConsistency(benchmark::State& state) {
  const auto cpf = ewens_cpf(R(1));
  for (auto _ : state) benchmark::DoNotOptimize(check_right_consistency(cpf, 9));
}
BENCHMARK(BM_ExactRightConsistency);

static void BM_FloatStationaryPair(benchmark::State& state) {
  const auto spec = LevySpec::two_parameter(R(1, 2), R(1));
  const auto law = meander_from_levy<double>(spec);
  for (auto _ : state) benchmark::DoNotOptimize(stationary_pair(spec, law, 10));
}
BENCHMARK(BM_FloatStationaryPair);

static void BM_MarkovSampler(benchmark::State& state) {
  const MarkovCompositionSampler sample(two_param_stationary_pair(0.5, 1.0, 10), 10);
  RngStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(sample(rng));
}
BENCHMARK(BM_MarkovSampler);

static void BM_UniformSampling(benchmark::State& state) {
  RngStream rng(2);
  for (auto _ : state) {
    auto s = sample_scale_invariant_partition(1.0, 0.01, rng);
    benchmark::DoNotOptimize(uniform_sampling_composition(s, 5, rng));
  }
}
BENCHMARK(BM_UniformSampling);

static void BM_PoissonSampling(benchmark::State& state) {
  RngStream rng(3);
  for (auto _ : state) {
    ScaleInvariantSet set(1.0);
    benchmark::DoNotOptimize(poisson_sampling_composition(set, 5, rng));
  }
}
BENCHMARK(BM_PoissonSampling);

static void BM_Arrangement(benchmark::State& state) {
  RngStream rng(4);
  const Partition lambda{4, 3, 2, 1, 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(arrange_partition(lambda, 0.5, 0.5, rng));
}
BENCHMARK(BM_Arrangement);
BENCHMARK_MAIN();
