#include <benchmark/benchmark.h>

#include "mpllab/sg_graph.hpp"
#include "mpllab/sim.hpp"

namespace {

using namespace mpllab;

void BM_SimulateGasket(benchmark::State& state) {
  SimConfig cfg;
  cfg.graph = sg_graph(static_cast<int>(state.range(0))).graph();
  cfg.horizon = 10.0;
  cfg.record_events = false;
  std::uint64_t events = 0;
  for (auto _ : state) {
    ++cfg.seed;
    events += simulate(cfg).event_count;
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(events));
}
BENCHMARK(BM_SimulateGasket)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

void BM_SimulateDriven(benchmark::State& state) {
  SimConfig cfg;
  cfg.graph = sg_graph(4).graph();
  cfg.horizon = 10.0;
  cfg.boundary = {{0, 1.0, 0.0}, {1, 0.0, 1.0}};
  cfg.record_events = false;
  for (auto _ : state) {
    ++cfg.seed;
    benchmark::DoNotOptimize(simulate(cfg).event_count);
  }
}
BENCHMARK(BM_SimulateDriven)->Unit(benchmark::kMillisecond);

}  // namespace
