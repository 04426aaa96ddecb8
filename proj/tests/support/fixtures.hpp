#pragma once

#include <vector>

#include "mpllab/batch.hpp"
#include "mpllab/graph.hpp"
#include "mpllab/rng.hpp"
#include "mpllab/state_function.hpp"

namespace fixtures {

inline std::vector<double> values(const mpllab::StateFunction& f) { return {f.values().begin(), f.values().end()}; }

inline mpllab::WeightedGraph triangle() { return mpllab::complete_graph(3); }

/// Random connected graph with n drawn from [lo, hi].
inline mpllab::WeightedGraph random_graph(mpllab::CounterRng& rng, int lo, int hi) {
  const int n = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  return mpllab::random_connected_graph(rng, n);
}

inline std::pair<mpllab::Vertex, mpllab::Vertex> random_pair(mpllab::CounterRng& rng, const mpllab::WeightedGraph& g) {
  const auto x = static_cast<mpllab::Vertex>(rng.below(g.vertex_count()));
  auto y = static_cast<mpllab::Vertex>(rng.below(g.vertex_count() - 1));
  if (y >= x) ++y;
  return {x, y};
}

inline std::vector<double> random_vector(mpllab::CounterRng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

}  // namespace fixtures
