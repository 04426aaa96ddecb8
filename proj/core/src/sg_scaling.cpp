#include "mpllab/sg_scaling.hpp"

#include <cmath>

#include <Eigen/Sparse>

#include "mpllab/error.hpp"
#include "mpllab/reduction.hpp"

namespace mpllab {

namespace {

// Green function of the Laplacian grounded at vertex 0, one column at a time.
class GroundedGreen {
 public:
  explicit GroundedGreen(const WeightedGraph& g) : n_(g.vertex_count()) {
    const Eigen::Index m = n_ - 1;
    std::vector<Eigen::Triplet<double>> t;
    for (const Edge& e : g.edges()) {
      const Eigen::Index u = e.u - 1;
      const Eigen::Index v = e.v - 1;
      if (u >= 0) t.emplace_back(u, u, e.c);
      if (v >= 0) t.emplace_back(v, v, e.c);
      if (u >= 0 && v >= 0) {
        t.emplace_back(u, v, -e.c);
        t.emplace_back(v, u, -e.c);
      }
    }
    Eigen::SparseMatrix<double> k(m, m);
    k.setFromTriplets(t.begin(), t.end());
    solver_.compute(k);
    if (solver_.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "gasket Laplacian factorization failed");
  }

  // Column y of G (G(0, .) = 0).
  void column(Vertex y, Eigen::VectorXd& out) const {
    out.setZero(n_);
    if (y == 0) return;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_ - 1);
    rhs(y - 1) = 1.0;
    out.tail(n_ - 1) = solver_.solve(rhs);
  }

 private:
  int n_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver_;
};

}  // namespace

double sg_corner_resistance_decimated(const SgGraph& g) {
  ResistorNetwork net(g.graph());
  for (Vertex v = g.graph().vertex_count() - 1; v >= 3; --v) net.eliminate(v);
  const double c01 = net.conductance(0, 1);
  const double c02 = net.conductance(0, 2);
  const double c12 = net.conductance(1, 2);
  return 1.0 / (c01 + c02 * c12 / (c02 + c12));
}

SgScalingTable sg_scaling(int max_level, int j_min, int j_max) {
  if (max_level < 0 || max_level > kSgScalingMaxLevel) {
    throw Error(ErrorCode::InvalidArgument, "sg_scaling supports levels 0.." + std::to_string(kSgScalingMaxLevel));
  }
  if (j_min < 0) throw Error(ErrorCode::InvalidArgument, "j_min must be nonnegative");
  SgScalingTable table;
  double previous = 0.0;
  for (int level = 0; level <= max_level; ++level) {
    const SgGraph sg(level);
    const WeightedGraph& g = sg.graph();
    const int n = g.vertex_count();
    const GroundedGreen green(g);
    const int hi = j_max < 0 ? level : std::min(j_max, level);

    Eigen::VectorXd diag(n);
    Eigen::VectorXd col;
    for (Vertex v = 0; v < n; ++v) {
      green.column(v, col);
      diag(v) = col(v);
    }

    std::vector<SgScalingRow> rows;
    for (int j = j_min; j <= hi; ++j) rows.push_back({level, j, 0.0, 0, 0, 0.0, 0});
    for (Vertex y = 0; y < n && !rows.empty(); ++y) {
      green.column(y, col);
      for (SgScalingRow& row : rows) {
        const double scale = std::pow(kSgRenormalization, level - row.j);
        for (std::uint32_t cell : sg.cells_containing(y, row.j)) {
          for (Vertex x : sg.cell_vertices(row.j, cell)) {
            if (x >= y) continue;
            const double r = diag(x) + diag(y) - 2.0 * col(x);
            ++row.pairs;
            if (r / scale > row.sup_ratio) {
              row.sup_ratio = r / scale;
              row.x = x;
              row.y = y;
              row.resistance = r;
            }
          }
        }
      }
    }
    double level_sup = 0.0;
    for (const SgScalingRow& row : rows) level_sup = std::max(level_sup, row.sup_ratio);
    table.level_constant.push_back(level_sup);
    table.constant = std::max(table.constant, level_sup);
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());

    SgCornerRow corner;
    corner.level = level;
    corner.resistance = diag(1);  // grounded at a_0, so R(a_0, a_1) = G(a_1, a_1)
    corner.decimated = sg_corner_resistance_decimated(sg);
    corner.ratio = level == 0 ? 0.0 : corner.resistance / previous;
    previous = corner.resistance;
    table.corners.push_back(corner);
  }
  return table;
}

nlohmann::json to_json(const SgScalingTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const SgScalingRow& r : t.rows) {
    rows.push_back({{"N", r.level},
                    {"j", r.j},
                    {"sup_ratio", r.sup_ratio},
                    {"x", r.x},
                    {"y", r.y},
                    {"resistance", r.resistance},
                    {"pairs", r.pairs}});
  }
  nlohmann::json corners = nlohmann::json::array();
  for (const SgCornerRow& c : t.corners) {
    corners.push_back({{"N", c.level}, {"resistance", c.resistance}, {"decimated", c.decimated}, {"ratio", c.ratio}});
  }
  return {{"rows", rows}, {"corners", corners}, {"level_constant", t.level_constant}, {"constant", t.constant}};
}

}  // namespace mpllab
