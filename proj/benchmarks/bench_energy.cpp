#include <benchmark/benchmark.h>

#include "mpllab/batch.hpp"
#include "mpllab/dirichlet.hpp"
#include "mpllab/graph.hpp"
#include "mpllab/inequality.hpp"
#include "mpllab/state_function.hpp"
#include "mpllab/torus.hpp"

namespace {

using namespace mpllab;

void BM_FullSpaceEnergy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CounterRng rng = CounterRng::stream(2, 0);
  const WeightedGraph g = random_connected_graph(rng, n);
  const Measure mu = bernoulli_measure(n, 0.3);
  const auto f = StateFunction::random_normal(SpaceDescriptor::full(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(energy(g, mu, f));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.size()));
}
BENCHMARK(BM_FullSpaceEnergy)->DenseRange(6, 16, 2);

void BM_PermutationEnergy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const WeightedGraph g = torus_graph(1, n).graph;
  CounterRng rng = CounterRng::stream(3, 0);
  const auto f = StateFunction::random_normal(SpaceDescriptor::permutation(n), rng);
  const Measure nu = uniform_measure(f.space());
  for (auto _ : state) benchmark::DoNotOptimize(energy(g, nu, f));
}
BENCHMARK(BM_PermutationEnergy)->DenseRange(4, 8);

void BM_MovingParticleCheck(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CounterRng rng = CounterRng::stream(4, 0);
  const WeightedGraph g = random_connected_graph(rng, n);
  const auto f = StateFunction::random_normal(SpaceDescriptor::full(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(check_mpl(g, 0.5, 0, n - 1, f, 1e-9).margin);
}
BENCHMARK(BM_MovingParticleCheck)->DenseRange(4, 12, 4);

void BM_Decomposition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  CounterRng rng = CounterRng::stream(5, 0);
  const WeightedGraph g = random_connected_graph(rng, n);
  const auto f = StateFunction::random_normal(SpaceDescriptor::full(n), rng);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_energy(g, 0.5, f).total);
}
BENCHMARK(BM_Decomposition)->DenseRange(3, 6);

}  // namespace
