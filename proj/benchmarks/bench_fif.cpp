#include <benchmark/benchmark.h>

#include <vector>

#include "fifspec/estimate.hpp"
#include "fifspec/generate.hpp"
#include "fifspec/spectrum.hpp"

namespace {

fifspec::FifModel sample_model() {
  return fifspec::derive_maps({{{0.0, 0.0}, {0.25, 1.0}, {0.5, 1.4}, {0.75, -0.5}, {1.0, 0.0}}},
                              {{0.3, -0.4, 0.5, 0.2}});
}

void BM_Generate(benchmark::State& state) {
  const auto model = sample_model();
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::generate(model, m));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(fifspec::sample_count(4, m)));
}
BENCHMARK(BM_Generate)->DenseRange(4, 9);

void BM_DtftIterative(benchmark::State& state) {
  const auto model = sample_model();
  const int m = static_cast<int>(state.range(0));
  const std::vector<double> grid = fifspec::dft_grid(fifspec::sample_count(4, m));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::dtft_iterative(model, m, grid));
}
BENCHMARK(BM_DtftIterative)->DenseRange(3, 6);

void BM_FifTransform(benchmark::State& state) {
  const auto model = sample_model();
  double omega = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fifspec::fif_transform(model, omega));
    omega += 0.37;
    if (omega > 100.0) omega = 0.1;
  }
}
BENCHMARK(BM_FifTransform);

void BM_EstimateModel(benchmark::State& state) {
  const auto model = sample_model();
  const auto signal = fifspec::generate(model, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::estimate_model(signal, 4));
}
BENCHMARK(BM_EstimateModel)->DenseRange(4, 8);

void BM_DetectOrder(benchmark::State& state) {
  const auto signal = fifspec::generate(sample_model(), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::detect_order(signal, 16));
}
BENCHMARK(BM_DetectOrder)->Arg(4)->Arg(6);

void BM_NoiseExperiment(benchmark::State& state) {
  const auto model = sample_model();
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::noise_experiment(model, 5, 20.0, 20));
}
BENCHMARK(BM_NoiseExperiment)->Unit(benchmark::kMillisecond);

}  // namespace
