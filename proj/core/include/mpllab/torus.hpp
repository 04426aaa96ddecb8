#pragma once

#include <vector>

#include "mpllab/graph.hpp"

namespace mpllab {

/// Vertex map g with g[v] the image of v.
using VertexMap = std::vector<Vertex>;

/// Discrete torus (Z/NZ)^d with nearest-neighbor edges, together with its
/// symmetry group: translations composed with quarter-turn rotations in the
/// coordinate planes (for d = 1, the reflection x -> -x).
struct TorusGraph {
  WeightedGraph graph;
  int dimension;
  int side;
  /// Every group element as a vertex map, identity first.
  std::vector<VertexMap> symmetries;

  /// Vertex id of the point with the given coordinates (taken mod side).
  Vertex vertex(std::span<const int> coords) const;
  std::vector<int> coordinates(Vertex v) const;
};

TorusGraph torus_graph(int dimension, int side, double c = 1.0);

}  // namespace mpllab
