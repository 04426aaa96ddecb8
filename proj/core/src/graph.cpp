#include "mpllab/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>
#include <utility>

#include "mpllab/error.hpp"

namespace mpllab {

namespace {

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
}

}  // namespace

WeightedGraph::WeightedGraph(int vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  if (n_ < 1) throw Error(ErrorCode::InvalidArgument, "graph needs at least one vertex");

  std::set<std::pair<Vertex, Vertex>> seen;
  std::vector<std::size_t> degree(static_cast<std::size_t>(n_), 0);
  for (const Edge& e : edges_) {
    if (e.u < 0 || e.u >= n_ || e.v < 0 || e.v >= n_) {
      throw Error(ErrorCode::VertexOutOfRange, "edge " + edge_text(e) + " with n=" + std::to_string(n_));
    }
    if (e.u == e.v) throw Error(ErrorCode::SelfLoop, "edge " + edge_text(e));
    if (!(e.c > 0.0) || !std::isfinite(e.c)) {
      throw Error(ErrorCode::NonpositiveConductance, "edge " + edge_text(e) + " has c=" + std::to_string(e.c));
    }
    if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) {
      throw Error(ErrorCode::DuplicateEdge, "edge " + edge_text(e));
    }
    ++degree[static_cast<std::size_t>(e.u)];
    ++degree[static_cast<std::size_t>(e.v)];
  }

  offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
  for (int v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_.back());
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    adjacency_[fill[e.u]++] = Neighbor{e.v, e.c, i};
    adjacency_[fill[e.v]++] = Neighbor{e.u, e.c, i};
  }
  for (int v = 0; v < n_; ++v) {
    std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
              adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
  }

  const auto dist = hop_distances(*this, 0);
  for (int v = 0; v < n_; ++v) {
    if (dist[v] < 0) {
      throw Error(ErrorCode::DisconnectedGraph, "vertex " + std::to_string(v) + " unreachable from 0");
    }
  }
}

std::span<const Neighbor> WeightedGraph::neighbors(Vertex v) const {
  check_vertex(v);
  return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::optional<std::size_t> WeightedGraph::edge_index(Vertex u, Vertex v) const {
  const auto nb = neighbors(u);
  check_vertex(v);
  auto it = std::lower_bound(nb.begin(), nb.end(), v,
                             [](const Neighbor& a, Vertex x) { return a.vertex < x; });
  if (it == nb.end() || it->vertex != v) return std::nullopt;
  return it->edge;
}

double WeightedGraph::conductance(Vertex u, Vertex v) const {
  const auto idx = edge_index(u, v);
  return idx ? edges_[*idx].c : 0.0;
}

double WeightedGraph::weighted_degree(Vertex v) const {
  double s = 0.0;
  for (const Neighbor& nb : neighbors(v)) s += nb.conductance;
  return s;
}

bool WeightedGraph::has_unit_conductances() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.c == 1.0; });
}

double WeightedGraph::max_conductance() const noexcept {
  double m = 0.0;
  for (const Edge& e : edges_) m = std::max(m, e.c);
  return m;
}

void WeightedGraph::check_vertex(Vertex v) const {
  if (v < 0 || v >= n_) {
    throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v) + " not in [0," + std::to_string(n_) + ")");
  }
}

WeightedGraph build_graph(int vertex_count, std::vector<Edge> edges) {
  return WeightedGraph(vertex_count, std::move(edges));
}

WeightedGraph complete_graph(int n, double c) {
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.push_back({u, v, c});
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph path_graph(int length, double c) {
  if (length < 1) throw Error(ErrorCode::InvalidArgument, "path needs at least one edge");
  std::vector<Edge> edges;
  for (int i = 0; i < length; ++i) edges.push_back({i, i + 1, c});
  return WeightedGraph(length + 1, std::move(edges));
}

WeightedGraph star_graph(int leaves, double c) {
  std::vector<Edge> edges;
  for (int i = 1; i <= leaves; ++i) edges.push_back({0, i, c});
  return WeightedGraph(leaves + 1, std::move(edges));
}

std::vector<int> hop_distances(const WeightedGraph& g, Vertex source) {
  g.check_vertex(source);
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::deque<Vertex> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    for (const Neighbor& nb : g.neighbors(v)) {
      if (dist[nb.vertex] < 0) {
        dist[nb.vertex] = dist[v] + 1;
        queue.push_back(nb.vertex);
      }
    }
  }
  return dist;
}

std::vector<Vertex> ball(const WeightedGraph& g, Vertex center, int radius) {
  const auto dist = hop_distances(g, center);
  std::vector<Vertex> out;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (dist[v] < radius) out.push_back(v);
  return out;
}

}  // namespace mpllab
