#include "mpllab/reduction.hpp"

#include <algorithm>
#include <string>

#include "mpllab/error.hpp"
#include "mpllab/numeric.hpp"

namespace mpllab {

ResistorNetwork::ResistorNetwork(const WeightedGraph& g)
    : adjacency_(static_cast<std::size_t>(g.vertex_count())),
      alive_(static_cast<std::size_t>(g.vertex_count()), 1),
      alive_count_(static_cast<std::size_t>(g.vertex_count())) {
  for (const Edge& e : g.edges()) {
    adjacency_[e.u][e.v] = e.c;
    adjacency_[e.v][e.u] = e.c;
  }
}

bool ResistorNetwork::contains(Vertex v) const {
  return v >= 0 && static_cast<std::size_t>(v) < alive_.size() && alive_[v];
}

void ResistorNetwork::eliminate(Vertex x) {
  if (!contains(x)) throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(x) + " not in network");
  if (alive_count_ < 3) throw Error(ErrorCode::TooFewVertices, "network reduction needs at least 3 vertices");

  const std::vector<std::pair<Vertex, double>> star(adjacency_[x].begin(), adjacency_[x].end());
  CompensatedSum total;
  for (const auto& [v, c] : star) total.add(c);
  const double denominator = total.value();

  for (const auto& [v, c] : star) adjacency_[v].erase(x);
  for (std::size_t a = 0; a < star.size(); ++a) {
    for (std::size_t b = a + 1; b < star.size(); ++b) {
      const double added = star[a].second * star[b].second / denominator;
      adjacency_[star[a].first][star[b].first] += added;
      adjacency_[star[b].first][star[a].first] += added;
    }
  }
  adjacency_[x].clear();
  alive_[x] = 0;
  --alive_count_;
}

std::vector<Vertex> ResistorNetwork::vertices() const {
  std::vector<Vertex> out;
  out.reserve(alive_count_);
  for (std::size_t v = 0; v < alive_.size(); ++v)
    if (alive_[v]) out.push_back(static_cast<Vertex>(v));
  return out;
}

std::vector<Edge> ResistorNetwork::edges() const {
  std::vector<Edge> out;
  for (std::size_t u = 0; u < adjacency_.size(); ++u) {
    if (!alive_[u]) continue;
    for (auto it = adjacency_[u].upper_bound(static_cast<Vertex>(u)); it != adjacency_[u].end(); ++it) {
      out.push_back({static_cast<Vertex>(u), it->first, it->second});
    }
  }
  return out;
}

double ResistorNetwork::conductance(Vertex u, Vertex v) const {
  if (!contains(u) || !contains(v)) return 0.0;
  auto it = adjacency_[u].find(v);
  return it == adjacency_[u].end() ? 0.0 : it->second;
}

const std::map<Vertex, double>& ResistorNetwork::neighbors(Vertex v) const {
  if (!contains(v)) throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v) + " not in network");
  return adjacency_[v];
}

WeightedGraph ResistorNetwork::compact() const {
  std::vector<Vertex> label(alive_.size(), -1);
  Vertex next = 0;
  for (std::size_t v = 0; v < alive_.size(); ++v)
    if (alive_[v]) label[v] = next++;
  std::vector<Edge> out = edges();
  for (Edge& e : out) {
    e.u = label[e.u];
    e.v = label[e.v];
  }
  return WeightedGraph(next, std::move(out));
}

std::vector<Edge> star_conductances(const WeightedGraph& g, Vertex x) {
  const auto nb = g.neighbors(x);
  CompensatedSum total;
  for (const Neighbor& a : nb) total.add(a.conductance);
  const double denominator = total.value();
  std::vector<Edge> out;
  for (std::size_t a = 0; a < nb.size(); ++a)
    for (std::size_t b = a + 1; b < nb.size(); ++b)
      out.push_back({nb[a].vertex, nb[b].vertex, nb[a].conductance * nb[b].conductance / denominator});
  return out;
}

WeightedGraph reduce_at(const WeightedGraph& g, Vertex x) {
  g.check_vertex(x);
  if (g.vertex_count() < 3) throw Error(ErrorCode::TooFewVertices, "reduce_at needs at least 3 vertices");
  ResistorNetwork net(g);
  net.eliminate(x);
  return net.compact();
}

const std::vector<Edge>& ReductionTrace::final_edges() const {
  return steps.empty() ? initial : steps.back().edges;
}

double ReductionTrace::effective_conductance() const {
  const auto& last = final_edges();
  if (last.size() != 1) throw Error(ErrorCode::InvalidArgument, "trace does not end in a single edge");
  return last.front().c;
}

nlohmann::json to_json(const ReductionTrace& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& step : trace.steps) {
    nlohmann::json edges = nlohmann::json::array();
    for (const Edge& e : step.edges) edges.push_back({e.u, e.v, e.c});
    out.push_back({{"removed", step.removed}, {"edges", std::move(edges)}});
  }
  return out;
}

ResistanceResult effective_resistance(const WeightedGraph& g, Vertex x, Vertex y) {
  g.check_vertex(x);
  g.check_vertex(y);
  std::vector<Vertex> order;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (v != x && v != y) order.push_back(v);
  return effective_resistance(g, x, y, order);
}

ResistanceResult effective_resistance(const WeightedGraph& g, Vertex x, Vertex y,
                                      std::span<const Vertex> order) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) throw Error(ErrorCode::SameVertex, "effective resistance needs two distinct vertices");
  if (order.size() + 2 != static_cast<std::size_t>(g.vertex_count())) {
    throw Error(ErrorCode::InvalidArgument, "elimination order must list every vertex except x and y");
  }

  ReductionTrace trace{x, y, {}, {}};
  for (const Edge& e : g.edges()) trace.initial.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.c});
  std::sort(trace.initial.begin(), trace.initial.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });

  ResistorNetwork net(g);
  for (Vertex v : order) {
    if (v == x || v == y) throw Error(ErrorCode::InvalidArgument, "elimination order contains x or y");
    net.eliminate(v);
    trace.steps.push_back({v, net.edges()});
  }
  const double c_eff = trace.effective_conductance();
  return {1.0 / c_eff, std::move(trace)};
}

}  // namespace mpllab
