#include "mpllab/sg_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "mpllab/error.hpp"

namespace mpllab {

namespace {

constexpr int kMaxLevel = 12;

std::size_t pow3(int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= 3;
  return r;
}

// Corner a_k in the lattice basis (a_1 - a_0, a_2 - a_0).
constexpr std::array<std::pair<std::int64_t, std::int64_t>, 3> kCorner{{{0, 0}, {1, 0}, {0, 1}}};

struct Build {
  std::vector<std::pair<std::int64_t, std::int64_t>> lattice;
  std::vector<std::vector<std::array<Vertex, 3>>> corners;
  std::vector<Edge> edges;
};

Build build_gasket(int level) {
  Build b;
  const std::int64_t side = std::int64_t{1} << level;
  std::unordered_map<std::int64_t, Vertex> ids;
  auto id_of = [&](std::int64_t p, std::int64_t q) {
    const std::int64_t key = p * (side + 1) + q;
    auto [it, inserted] = ids.emplace(key, static_cast<Vertex>(b.lattice.size()));
    if (inserted) b.lattice.emplace_back(p, q);
    return it->second;
  };

  b.corners.resize(static_cast<std::size_t>(level) + 1);
  for (int m = 0; m <= level; ++m) {
    const std::size_t cells = pow3(m);
    b.corners[m].resize(cells);
    for (std::size_t word = 0; word < cells; ++word) {
      std::int64_t p = 0;
      std::int64_t q = 0;
      std::size_t rest = word;
      // letters from last to first
      for (int i = m; i >= 1; --i) {
        const int letter = static_cast<int>(rest % 3);
        rest /= 3;
        p += kCorner[letter].first << (level - i);
        q += kCorner[letter].second << (level - i);
      }
      for (int k = 0; k < 3; ++k) {
        b.corners[m][word][k] =
            id_of(p + (kCorner[k].first << (level - m)), q + (kCorner[k].second << (level - m)));
      }
    }
  }
  for (const auto& c : b.corners[level]) {
    b.edges.push_back({c[0], c[1], 1.0});
    b.edges.push_back({c[1], c[2], 1.0});
    b.edges.push_back({c[0], c[2], 1.0});
  }
  return b;
}

}  // namespace

SgGraph::SgGraph(int level)
    : level_(level), graph_([&] {
        if (level < 0 || level > kMaxLevel) {
          throw Error(ErrorCode::InvalidArgument, "SG level must be in [0," + std::to_string(kMaxLevel) + "]");
        }
        return WeightedGraph(1, {});
      }()) {
  Build b = build_gasket(level);
  const int n = static_cast<int>(b.lattice.size());
  graph_ = WeightedGraph(n, std::move(b.edges));
  lattice_ = std::move(b.lattice);
  corners_ = std::move(b.corners);

  member_offsets_.resize(level + 1);
  member_cells_.resize(level + 1);
  cell_offsets_.resize(level + 1);
  cell_members_.resize(level + 1);
  const auto& finest = corners_[level];
  for (int j = 0; j <= level; ++j) {
    const std::size_t divisor = pow3(level - j);
    std::vector<std::vector<std::uint32_t>> per_vertex(static_cast<std::size_t>(n));
    for (std::size_t word = 0; word < finest.size(); ++word) {
      const auto prefix = static_cast<std::uint32_t>(word / divisor);
      for (Vertex v : finest[word]) {
        auto& cells = per_vertex[v];
        if (std::find(cells.begin(), cells.end(), prefix) == cells.end()) cells.push_back(prefix);
      }
    }
    auto& offsets = member_offsets_[j];
    auto& flat = member_cells_[j];
    offsets.assign(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::uint32_t> cell_size(pow3(j), 0);
    for (int v = 0; v < n; ++v) {
      std::sort(per_vertex[v].begin(), per_vertex[v].end());
      offsets[v + 1] = offsets[v] + static_cast<std::uint32_t>(per_vertex[v].size());
      for (auto c : per_vertex[v]) {
        flat.push_back(c);
        ++cell_size[c];
      }
    }
    auto& coff = cell_offsets_[j];
    coff.assign(cell_size.size() + 1, 0);
    for (std::size_t c = 0; c < cell_size.size(); ++c) coff[c + 1] = coff[c] + cell_size[c];
    auto& members = cell_members_[j];
    members.resize(coff.back());
    std::vector<std::uint32_t> fill(coff.begin(), coff.end() - 1);
    for (int v = 0; v < n; ++v)
      for (auto c : per_vertex[v]) members[fill[c]++] = v;
  }
}

void SgGraph::check_level(int j) const {
  if (j < 0 || j > level_) {
    throw Error(ErrorCode::InvalidArgument,
                "cell level " + std::to_string(j) + " outside [0," + std::to_string(level_) + "]");
  }
}

std::pair<double, double> SgGraph::coordinates(Vertex v) const {
  graph_.check_vertex(v);
  const double scale = std::ldexp(1.0, -level_);
  const auto [p, q] = lattice_[v];
  return {(static_cast<double>(p) + 0.5 * static_cast<double>(q)) * scale,
          static_cast<double>(q) * (std::sqrt(3.0) / 2.0) * scale};
}

std::size_t SgGraph::cell_count(int j) const {
  check_level(j);
  return corners_[j].size();
}

std::array<Vertex, 3> SgGraph::cell_corners(int j, std::size_t word) const {
  check_level(j);
  return corners_[j].at(word);
}

std::array<Vertex, 3> SgGraph::cell_corners(std::span<const int> word) const {
  std::size_t index = 0;
  for (int letter : word) {
    if (letter < 0 || letter > 2) throw Error(ErrorCode::InvalidArgument, "word letters must be 0, 1 or 2");
    index = index * 3 + static_cast<std::size_t>(letter);
  }
  return cell_corners(static_cast<int>(word.size()), index);
}

std::span<const Vertex> SgGraph::cell_vertices(int j, std::size_t word) const {
  check_level(j);
  const auto& off = cell_offsets_[j];
  if (word + 1 >= off.size()) throw Error(ErrorCode::InvalidArgument, "cell word out of range");
  return {cell_members_[j].data() + off[word], off[word + 1] - off[word]};
}

std::span<const std::uint32_t> SgGraph::cells_containing(Vertex v, int j) const {
  check_level(j);
  graph_.check_vertex(v);
  const auto& off = member_offsets_[j];
  return {member_cells_[j].data() + off[v], off[v + 1] - off[v]};
}

Vertex SgGraph::vertex_at(std::span<const int> word, int corner) const {
  if (corner < 0 || corner > 2) throw Error(ErrorCode::InvalidArgument, "corner must be 0, 1 or 2");
  return cell_corners(word)[corner];
}

std::size_t SgGraph::expected_vertex_count(int level) { return 3 * (pow3(level) + 1) / 2; }
std::size_t SgGraph::expected_edge_count(int level) { return pow3(level + 1); }

SgGraph sg_graph(int level) { return SgGraph(level); }

bool same_cell(const SgGraph& g, Vertex x, Vertex y, int j) {
  const auto cx = g.cells_containing(x, j);
  const auto cy = g.cells_containing(y, j);
  for (auto a : cx)
    for (auto b : cy)
      if (a == b) return true;
  return false;
}

}  // namespace mpllab
