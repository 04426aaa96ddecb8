#pragma once

#include <map>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpllab/graph.hpp"

namespace mpllab {

/// Mutable resistor network keyed by the original vertex ids, supporting
/// star-mesh elimination. Removing x adds c_yx c_xz / sum_w c_xw to every pair
/// y, z of neighbors of x, creating edges where none existed.
class ResistorNetwork {
 public:
  explicit ResistorNetwork(const WeightedGraph& g);

  void eliminate(Vertex x);

  bool contains(Vertex v) const;
  std::size_t vertex_count() const noexcept { return alive_count_; }
  std::vector<Vertex> vertices() const;
  /// Edges with u < v, ordered by (u, v).
  std::vector<Edge> edges() const;
  double conductance(Vertex u, Vertex v) const;
  const std::map<Vertex, double>& neighbors(Vertex v) const;

  /// Graph on the surviving vertices, relabelled densely in ascending order.
  WeightedGraph compact() const;

 private:
  std::vector<std::map<Vertex, double>> adjacency_;
  std::vector<char> alive_;
  std::size_t alive_count_;
};

/// Star conductances c^{*,x}_{yz} for all neighbor pairs y < z of x.
std::vector<Edge> star_conductances(const WeightedGraph& g, Vertex x);

/// Reduced graph on V minus {x}; vertex v > x is renumbered v - 1.
WeightedGraph reduce_at(const WeightedGraph& g, Vertex x);

struct ReductionStep {
  Vertex removed;
  std::vector<Edge> edges;  // surviving network after the removal, original ids
};

struct ReductionTrace {
  Vertex x;
  Vertex y;
  std::vector<Edge> initial;  // original edges, normalized u < v
  std::vector<ReductionStep> steps;

  /// Edges of the final network on {x, y}.
  const std::vector<Edge>& final_edges() const;
  double effective_conductance() const;
};

nlohmann::json to_json(const ReductionTrace& trace);

struct ResistanceResult {
  double resistance;
  ReductionTrace trace;
};

/// R_eff by eliminating V minus {x, y} in ascending id order.
ResistanceResult effective_resistance(const WeightedGraph& g, Vertex x, Vertex y);
/// Same, with an explicit elimination order (a permutation of V minus {x, y}).
ResistanceResult effective_resistance(const WeightedGraph& g, Vertex x, Vertex y,
                                      std::span<const Vertex> order);

}  // namespace mpllab
