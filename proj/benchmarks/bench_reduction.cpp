#include <benchmark/benchmark.h>

#include "mpllab/batch.hpp"
#include "mpllab/reduction.hpp"
#include "mpllab/resistance.hpp"
#include "mpllab/sg_scaling.hpp"

namespace {

using namespace mpllab;

WeightedGraph graph_of(int n) {
  CounterRng rng = CounterRng::stream(1, static_cast<std::uint64_t>(n));
  return random_connected_graph(rng, n);
}

void BM_SequentialReduction(benchmark::State& state) {
  const WeightedGraph g = graph_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(effective_resistance(g, 0, 1).resistance);
}
BENCHMARK(BM_SequentialReduction)->RangeMultiplier(2)->Range(8, 128);

void BM_GroundedSolve(benchmark::State& state) {
  const WeightedGraph g = graph_of(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(effective_resistance_oracle(g, 0, 1));
}
BENCHMARK(BM_GroundedSolve)->RangeMultiplier(2)->Range(8, 128);

void BM_SgScaling(benchmark::State& state) {
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sg_scaling(level).constant);
}
BENCHMARK(BM_SgScaling)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

}  // namespace
