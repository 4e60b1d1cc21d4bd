#include <benchmark/benchmark.h>

#include "dimcut/forest.hpp"
#include "dimcut/mlp.hpp"
#include "dimcut/pca.hpp"
#include "dimcut/resolution.hpp"
#include "dimcut/rng.hpp"

namespace {

dimcut::Dataset regression(std::size_t rows, std::size_t features) {
  dimcut::SynthSpec spec;
  spec.n_rows = rows;
  spec.n_features = features;
  return dimcut::make_regression(spec);
}

void BM_ForestFit(benchmark::State& state) {
  const auto data = regression(static_cast<std::size_t>(state.range(0)), 8);
  dimcut::ForestConfig config;
  config.n_trees = 20;
  for (auto _ : state) benchmark::DoNotOptimize(dimcut::fit_forest(data, config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ForestFit)->RangeMultiplier(2)->Range(500, 4000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_PcaFit(benchmark::State& state) {
  const auto data = regression(2000, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dimcut::fit_pca(data));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PcaFit)->RangeMultiplier(2)->Range(5, 80)->Complexity()->Unit(benchmark::kMicrosecond);

void BM_MlpEvaluate(benchmark::State& state) {
  const auto data = regression(static_cast<std::size_t>(state.range(0)), 5);
  dimcut::MlpConfig config;
  config.max_epochs = 20;
  for (auto _ : state) benchmark::DoNotOptimize(dimcut::evaluate(data, config));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MlpEvaluate)->RangeMultiplier(2)->Range(500, 4000)->Complexity()->Unit(benchmark::kMillisecond);

void BM_AutoCut(benchmark::State& state) {
  dimcut::Rng rng(1);
  std::vector<double> raw(static_cast<std::size_t>(state.range(0)));
  for (auto& v : raw) v = rng.uniform();
  const auto importance = dimcut::ImportanceVector::normalize(raw, dimcut::ImportanceSource::Forest);
  for (auto _ : state) benchmark::DoNotOptimize(dimcut::auto_cut(importance));
}
BENCHMARK(BM_AutoCut)->RangeMultiplier(4)->Range(4, 1024);

}  // namespace

BENCHMARK_MAIN();
