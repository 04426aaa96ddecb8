#include <benchmark/benchmark.h>

#include "mpllab/graph.hpp"
#include "mpllab/spectral.hpp"
#include "mpllab/torus.hpp"

namespace {

using namespace mpllab;

void BM_InterchangeGap(benchmark::State& state) {
  const WeightedGraph g = path_graph(static_cast<int>(state.range(0)) - 1);
  for (auto _ : state) benchmark::DoNotOptimize(gap_interchange(g).gap);
}
BENCHMARK(BM_InterchangeGap)->DenseRange(3, 6)->Unit(benchmark::kMillisecond);

void BM_InterchangeGapLanczos(benchmark::State& state) {
  const WeightedGraph g = torus_graph(1, 8).graph;
  for (auto _ : state) benchmark::DoNotOptimize(gap_interchange(g).gap);
}
BENCHMARK(BM_InterchangeGapLanczos)->Unit(benchmark::kMillisecond)->Iterations(1);

void BM_ExclusionGap(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightedGraph g = torus_graph(1, n).graph;
  for (auto _ : state) benchmark::DoNotOptimize(gap_exclusion(g, n / 2).gap);
}
BENCHMARK(BM_ExclusionGap)->DenseRange(6, 12, 2)->Unit(benchmark::kMillisecond);

}  // namespace
