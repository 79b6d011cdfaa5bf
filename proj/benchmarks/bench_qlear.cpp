#include <benchmark/benchmark.h>

#include <random>

#include "qlear/classifier.hpp"
#include "qlear/dataset.hpp"
#include "qlear/density.hpp"
#include "qlear/model_selection.hpp"

namespace {

std::vector<qlear::FeatureVector> random_vectors(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<qlear::FeatureVector> out(n, qlear::FeatureVector(d));
  for (auto& v : out)
    for (double& x : v) x = g(rng);
  return out;
}

void BM_Spectrum(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto rho = qlear::normalize_to_density(qlear::gram_accumulate(random_vectors(2 * d, d, 1)));
  for (auto _ : state) benchmark::DoNotOptimize(qlear::spectrum(rho));
}
BENCHMARK(BM_Spectrum)->Arg(2)->Arg(4)->Arg(13)->Arg(60);

void BM_EntropyDelta(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto ref = random_vectors(n, 4, 2);
  const auto query = random_vectors(1, 4, 3).front();
  for (auto _ : state) benchmark::DoNotOptimize(qlear::entropy_delta(ref, query, 2.0));
}
BENCHMARK(BM_EntropyDelta)->Arg(1)->Arg(14)->Arg(29);

void BM_Classify(benchmark::State& state) {
  std::vector<qlear::ClassPool> pools;
  for (int c = 0; c < 3; ++c) pools.push_back({"c" + std::to_string(c), random_vectors(25, 4, 10 + c)});
  const auto query = random_vectors(1, 4, 99).front();
  const qlear::QlearParams params{2.0, static_cast<std::size_t>(state.range(0)), 1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(qlear::classify(query, pools, params));
}
BENCHMARK(BM_Classify)->Arg(1)->Arg(14)->Arg(25);

void BM_TwoFoldCvIris(benchmark::State& state) {
  const auto iris = qlear::load_csv(QLEAR_BENCH_DATA_DIR "/iris.csv");
  const auto sample = qlear::sample_pools(iris, 0.5, 0);
  const auto grid = qlear::ParamGrid::defaults();
  for (auto _ : state) benchmark::DoNotOptimize(qlear::two_fold_cv(sample.pools, grid, 0));
}
BENCHMARK(BM_TwoFoldCvIris)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
