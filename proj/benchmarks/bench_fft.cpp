#include <benchmark/benchmark.h>

#include <random>

#include "fifspec/numerics.hpp"

namespace {

fifspec::ComplexSequence random_input(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  fifspec::ComplexSequence x(n);
  for (auto& v : x) v = {g(rng), g(rng)};
  return x;
}

void BM_DftPowerOfTwo(benchmark::State& state) {
  const auto x = random_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::dft(x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DftPowerOfTwo)->RangeMultiplier(4)->Range(64, 1 << 16)->Complexity(benchmark::oNLogN);

// M N = (4^m + 1) * 4: mixed radix with a factor of 5 and 17 for m = 4.
void BM_DftMixedRadix(benchmark::State& state) {
  const auto x = random_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::dft(x));
}
BENCHMARK(BM_DftMixedRadix)->Arg(1000)->Arg(4374)->Arg(16200)->Arg(60000);

// Large prime lengths take the chirp-z path.
void BM_DftBluestein(benchmark::State& state) {
  const auto x = random_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::dft(x));
}
BENCHMARK(BM_DftBluestein)->Arg(1031)->Arg(4099)->Arg(16411);

void BM_LeastSquares(benchmark::State& state) {
  const std::size_t rows = static_cast<std::size_t>(state.range(0));
  const std::size_t cols = static_cast<std::size_t>(state.range(1));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  fifspec::ComplexMatrix a(rows, cols);
  fifspec::ComplexSequence b(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a(r, c) = {g(rng), g(rng)};
    b[r] = {g(rng), g(rng)};
  }
  for (auto _ : state) benchmark::DoNotOptimize(fifspec::least_squares(a, b));
}
BENCHMARK(BM_LeastSquares)->Args({64, 4})->Args({4352, 4})->Args({4352, 16});

}  // namespace
