// Evaluator scaling: term-by-term loops against the dense vectorized forms.
#include <benchmark/benchmark.h>

#include <random>

#include "kgroup/generators.hpp"
#include "kgroup/problems.hpp"
#include "kgroup/pubo.hpp"

namespace {

using namespace kgroup;

Assignment random_relaxed(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  Tensor x(n, k);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int c = 0; c < k; ++c) {
      x.at(i, c) = uni(rng);
      sum += x.at(i, c);
    }
    for (int c = 0; c < k; ++c) x.at(i, c) /= sum;
  }
  return Assignment::relaxed(x);
}

CompiledLoss coloring_instance(int n, std::uint64_t seed) {
  Graph g = random_graph(n, 3 * n, seed);
  return compile_graph_coloring(g, 4);
}

void BM_PuboNaive(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  CompiledLoss loss = coloring_instance(n, 7);
  Assignment x = random_relaxed(n, loss.k, 11);
  for (auto _ : state) benchmark::DoNotOptimize(eval_pubo_naive(loss.pubo, x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_PuboNaive)->Range(32, 512)->Complexity();

void BM_PuboVectorized(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  CompiledLoss loss = coloring_instance(n, 7);
  Assignment x = random_relaxed(n, loss.k, 11);
  for (auto _ : state) benchmark::DoNotOptimize(eval_pubo_vectorized(loss.pubo, x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_PuboVectorized)->Range(32, 512)->Complexity();

void BM_QuboNaive(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = random_graph(n, 3 * n, 7);
  CompiledLoss loss = compile_maxcut(g);
  Assignment x = random_relaxed(n, 2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(eval_qubo_naive(loss.qubo, x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_QuboNaive)->Range(32, 512)->Complexity();

void BM_QuboVectorized(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Graph g = random_graph(n, 3 * n, 7);
  CompiledLoss loss = compile_maxcut(g);
  Assignment x = random_relaxed(n, 2, 11);
  for (auto _ : state) benchmark::DoNotOptimize(eval_qubo_vectorized(loss.qubo, x));
  state.SetComplexityN(n);
}
BENCHMARK(BM_QuboVectorized)->Range(32, 512)->Complexity();

}  // namespace
