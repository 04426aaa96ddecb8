#include "mpllab/torus.hpp"

#include <deque>
#include <set>
#include <string>

#include "mpllab/error.hpp"

namespace mpllab {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

Vertex encode(std::span<const int> coords, int side) {
  Vertex id = 0;
  for (std::size_t i = coords.size(); i-- > 0;) id = id * side + mod(coords[i], side);
  return id;
}

std::vector<int> decode(Vertex v, int dimension, int side) {
  std::vector<int> coords(static_cast<std::size_t>(dimension));
  for (int i = 0; i < dimension; ++i) {
    coords[i] = v % side;
    v /= side;
  }
  return coords;
}

template <typename F>
VertexMap make_map(int count, int dimension, int side, F&& transform) {
  VertexMap m(static_cast<std::size_t>(count));
  for (Vertex v = 0; v < count; ++v) {
    auto c = decode(v, dimension, side);
    transform(c);
    m[v] = encode(c, side);
  }
  return m;
}

VertexMap compose(const VertexMap& a, const VertexMap& b) {
  // (a o b)(v) = a(b(v))
  VertexMap out(b.size());
  for (std::size_t v = 0; v < b.size(); ++v) out[v] = a[b[v]];
  return out;
}

}  // namespace

Vertex TorusGraph::vertex(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != dimension) {
    throw Error(ErrorCode::InvalidArgument, "coordinate count must equal the torus dimension");
  }
  return encode(coords, side);
}

std::vector<int> TorusGraph::coordinates(Vertex v) const {
  graph.check_vertex(v);
  return decode(v, dimension, side);
}

TorusGraph torus_graph(int dimension, int side, double c) {
  if (dimension < 1) throw Error(ErrorCode::InvalidArgument, "torus dimension must be >= 1");
  if (side < 3) {
    throw Error(ErrorCode::InvalidArgument,
                "torus side must be >= 3 (side " + std::to_string(side) + " creates multi-edges)");
  }
  int count = 1;
  for (int i = 0; i < dimension; ++i) {
    if (count > (1 << 24) / side) throw Error(ErrorCode::ProblemTooLarge, "torus too large");
    count *= side;
  }

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(count) * dimension);
  for (Vertex v = 0; v < count; ++v) {
    auto coords = decode(v, dimension, side);
    for (int i = 0; i < dimension; ++i) {
      auto shifted = coords;
      ++shifted[i];
      edges.push_back({v, encode(shifted, side), c});
    }
  }

  std::vector<VertexMap> generators;
  for (int i = 0; i < dimension; ++i) {
    generators.push_back(make_map(count, dimension, side, [i](std::vector<int>& x) { ++x[i]; }));
  }
  if (dimension == 1) {
    generators.push_back(make_map(count, dimension, side, [](std::vector<int>& x) { x[0] = -x[0]; }));
  }
  for (int i = 0; i + 1 < dimension; ++i) {
    generators.push_back(make_map(count, dimension, side, [i](std::vector<int>& x) {
      const int a = x[i];
      x[i] = -x[i + 1];
      x[i + 1] = a;
    }));
  }

  // Closure of the generated group.
  VertexMap identity(static_cast<std::size_t>(count));
  for (Vertex v = 0; v < count; ++v) identity[v] = v;
  std::vector<VertexMap> group{identity};
  std::set<VertexMap> seen{identity};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const VertexMap current = group[frontier.front()];
    frontier.pop_front();
    for (const auto& gen : generators) {
      VertexMap next = compose(gen, current);
      if (seen.insert(next).second) {
        group.push_back(std::move(next));
        frontier.push_back(group.size() - 1);
      }
    }
  }

  return TorusGraph{WeightedGraph(count, std::move(edges)), dimension, side, std::move(group)};
}

}  // namespace mpllab
