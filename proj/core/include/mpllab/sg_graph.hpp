#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "mpllab/graph.hpp"

namespace mpllab {

/// Level-N Sierpinski gasket graph with unit conductances.
///
/// Vertex ids are assigned by level of first appearance: the boundary corners
/// a_0, a_1, a_2 are 0, 1, 2; the vertices new at level m follow those of level
/// m-1. Eliminating vertices in descending id therefore decimates the finest
/// level first.
///
/// A level-j cell is addressed by a word w in {0,1,2}^j, stored as the base-3
/// number with the first letter most significant. Its vertex set is the image
/// Psi_w(V_{N-j}); a vertex where two cells touch belongs to both.
class SgGraph {
 public:
  explicit SgGraph(int level);

  int level() const noexcept { return level_; }
  const WeightedGraph& graph() const noexcept { return graph_; }

  static constexpr std::array<Vertex, 3> boundary() noexcept { return {0, 1, 2}; }
  static constexpr bool is_boundary(Vertex v) noexcept { return v >= 0 && v < 3; }

  /// Planar position with a_0=(0,0), a_1=(1,0), a_2=(1/2, sqrt(3)/2).
  std::pair<double, double> coordinates(Vertex v) const;

  std::size_t cell_count(int j) const;
  /// Corners Psi_w(a_0), Psi_w(a_1), Psi_w(a_2) of the level-j cell w.
  std::array<Vertex, 3> cell_corners(int j, std::size_t word) const;
  std::array<Vertex, 3> cell_corners(std::span<const int> word) const;
  /// Vertices of the level-j cell w, ascending.
  std::span<const Vertex> cell_vertices(int j, std::size_t word) const;
  /// Level-j cells containing v (one or two).
  std::span<const std::uint32_t> cells_containing(Vertex v, int j) const;

  /// Index of the vertex Psi_w(a_corner).
  Vertex vertex_at(std::span<const int> word, int corner) const;

  static std::size_t expected_vertex_count(int level);
  static std::size_t expected_edge_count(int level);

 private:
  void check_level(int j) const;

  int level_;
  WeightedGraph graph_;
  std::vector<std::pair<std::int64_t, std::int64_t>> lattice_;  // scaled by 2^N
  std::vector<std::vector<std::array<Vertex, 3>>> corners_;      // [j][word]
  // membership_[j]: CSR, vertex -> cells
  std::vector<std::vector<std::uint32_t>> member_offsets_;
  std::vector<std::vector<std::uint32_t>> member_cells_;
  // cell_members_[j]: CSR, cell -> vertices
  std::vector<std::vector<std::uint32_t>> cell_offsets_;
  std::vector<std::vector<Vertex>> cell_members_;
};

SgGraph sg_graph(int level);

/// True iff x and y lie in a common level-j cell.
bool same_cell(const SgGraph& g, Vertex x, Vertex y, int j);

}  // namespace mpllab
