#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mpllab {

/// Dense vertex id in [0, n).
using Vertex = int;

/// Undirected edge with conductance c > 0.
struct Edge {
  Vertex u;
  Vertex v;
  double c;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Neighbor {
  Vertex vertex;
  double conductance;
  std::size_t edge;
};

/// Finite connected weighted graph. Immutable once built: construction
/// validates simplicity, positivity of conductances and connectivity.
class WeightedGraph {
 public:
  WeightedGraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  /// Neighbors of v sorted by vertex id.
  std::span<const Neighbor> neighbors(Vertex v) const;

  /// c_uv, or 0 when u and v are not adjacent.
  double conductance(Vertex u, Vertex v) const;
  std::optional<std::size_t> edge_index(Vertex u, Vertex v) const;

  /// Sum of conductances at v.
  double weighted_degree(Vertex v) const;
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }

  bool has_unit_conductances() const noexcept;
  double max_conductance() const noexcept;

  void check_vertex(Vertex v) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adjacency_;
};

WeightedGraph build_graph(int vertex_count, std::vector<Edge> edges);

WeightedGraph complete_graph(int n, double c = 1.0);
/// Path 0 - 1 - ... - length.
WeightedGraph path_graph(int length, double c = 1.0);
/// Star with center 0 and leaves 1..leaves.
WeightedGraph star_graph(int leaves, double c = 1.0);

/// Unweighted hop distances from source (all finite on a valid graph).
std::vector<int> hop_distances(const WeightedGraph& g, Vertex source);

/// Vertices within hop distance strictly less than radius of center.
std::vector<Vertex> ball(const WeightedGraph& g, Vertex center, int radius);

}  // namespace mpllab
