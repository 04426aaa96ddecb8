#include "mpllab/resistance.hpp"

#include <string>

#include "mpllab/error.hpp"
#include "mpllab/numeric.hpp"
#include "mpllab/reduction.hpp"

namespace mpllab {

namespace {

void check_dense_size(const WeightedGraph& g) {
  if (g.vertex_count() > kDenseSolveLimit) {
    throw Error(ErrorCode::ProblemTooLarge, "dense solve limited to " + std::to_string(kDenseSolveLimit) +
                                                " vertices, graph has " + std::to_string(g.vertex_count()));
  }
}

void check_function(const WeightedGraph& g, std::span<const double> h) {
  if (h.size() != static_cast<std::size_t>(g.vertex_count())) {
    throw Error(ErrorCode::InvalidArgument, "vertex function has wrong length");
  }
}

// Grounded Laplacian with row/column `ground` removed; index i maps to the
// vertex i (i < ground) or i + 1.
Eigen::MatrixXd grounded(const Eigen::MatrixXd& k, Vertex ground) {
  const Eigen::Index n = k.rows();
  Eigen::MatrixXd out(n - 1, n - 1);
  for (Eigen::Index i = 0, oi = 0; i < n; ++i) {
    if (i == ground) continue;
    for (Eigen::Index j = 0, oj = 0; j < n; ++j) {
      if (j == ground) continue;
      out(oi, oj++) = k(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace

Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g) {
  const int n = g.vertex_count();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    k(e.u, e.u) += e.c;
    k(e.v, e.v) += e.c;
    k(e.u, e.v) -= e.c;
    k(e.v, e.u) -= e.c;
  }
  return k;
}

double effective_resistance_oracle(const WeightedGraph& g, Vertex x, Vertex y) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) throw Error(ErrorCode::SameVertex, "effective resistance needs two distinct vertices");
  check_dense_size(g);

  const Eigen::MatrixXd k = grounded(laplacian_matrix(g), y);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(k);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw Error(ErrorCode::SingularSystem, "grounded Laplacian is not positive definite");
  }
  const Eigen::Index xi = x < y ? x : x - 1;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k.rows());
  rhs(xi) = 1.0;
  const Eigen::VectorXd p = ldlt.solve(rhs);
  if (!(p(xi) > 0.0)) throw Error(ErrorCode::SingularSystem, "nonpositive potential at the source");
  return p(xi);
}

Eigen::MatrixXd resistance_matrix(const WeightedGraph& g) {
  check_dense_size(g);
  const int n = g.vertex_count();
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) return r;
  const Eigen::MatrixXd k = grounded(laplacian_matrix(g), 0);
  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "grounded Laplacian is singular");
  Eigen::MatrixXd green = Eigen::MatrixXd::Zero(n, n);
  green.bottomRightCorner(n - 1, n - 1) = llt.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r(i, j) = green(i, i) + green(j, j) - 2.0 * green(i, j);
  return r;
}

double el_energy(std::span<const Edge> edges, std::span<const double> h) {
  CompensatedSum s;
  for (const Edge& e : edges) {
    const double d = h[e.u] - h[e.v];
    s.add(e.c * d * d);
  }
  return s.value();
}

double el_energy(const WeightedGraph& g, std::span<const double> h) {
  check_function(g, h);
  return el_energy(g.edges(), h);
}

double laplacian_at(const WeightedGraph& g, std::span<const double> h, Vertex x) {
  check_function(g, h);
  CompensatedSum s;
  for (const Neighbor& nb : g.neighbors(x)) s.add(nb.conductance * (h[nb.vertex] - h[x]));
  return s.value();
}

VertexFunction harmonic_extension(const WeightedGraph& g, Vertex x, Vertex y) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) throw Error(ErrorCode::SameVertex, "harmonic extension needs two distinct vertices");
  check_dense_size(g);
  const int n = g.vertex_count();
  VertexFunction h(static_cast<std::size_t>(n), 0.0);
  h[x] = 1.0;
  std::vector<Vertex> interior;
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
  for (Vertex v = 0; v < n; ++v) {
    if (v != x && v != y) {
      slot[v] = static_cast<Eigen::Index>(interior.size());
      interior.push_back(v);
    }
  }
  if (interior.empty()) return h;

  const Eigen::Index m = static_cast<Eigen::Index>(interior.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (const Neighbor& nb : g.neighbors(interior[i])) {
      a(i, i) += nb.conductance;
      if (slot[nb.vertex] >= 0) {
        a(i, slot[nb.vertex]) -= nb.conductance;
      } else if (nb.vertex == x) {
        b(i) += nb.conductance;
      }
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "interior Dirichlet problem singular");
  const Eigen::VectorXd sol = ldlt.solve(b);
  for (Eigen::Index i = 0; i < m; ++i) h[interior[i]] = sol(i);
  return h;
}

VerificationReport check_energy_identity(const WeightedGraph& g, Vertex x, std::span<const double> f,
                                         double relative_tol) {
  check_function(g, f);
  if (g.degree(x) == 0) throw Error(ErrorCode::InvalidArgument, "vertex has no neighbors");

  CompensatedSum star;
  CompensatedSum degree;
  for (const Neighbor& nb : g.neighbors(x)) {
    const double d = f[x] - f[nb.vertex];
    star.add(nb.conductance * d * d);
    degree.add(nb.conductance);
  }
  CompensatedSum mesh;
  for (const Edge& e : star_conductances(g, x)) {
    const double d = f[e.u] - f[e.v];
    mesh.add(e.c * d * d);
  }
  const double lx = laplacian_at(g, f, x);
  const double correction = lx * lx / degree.value();
  mesh.add(correction);

  auto r = identity_report("energy-identity", star.value(), mesh.value(), relative_tol);
  r.instance = {{"n", g.vertex_count()}, {"x", x}};
  r.witness = {{"laplacian_at_x", lx}, {"correction", correction}};
  return r;
}

VerificationReport check_dirichlet_principle(const WeightedGraph& g, Vertex x, Vertex y,
                                             std::span<const double> h, double relative_tol) {
  check_function(g, h);
  const double drop = h[x] - h[y];
  const double resistance = effective_resistance_oracle(g, x, y);
  const double energy = el_energy(g, h);
  auto r = inequality_report("dirichlet-principle", drop * drop, resistance * energy, relative_tol);
  r.instance = {{"n", g.vertex_count()}, {"x", x}, {"y", y}};
  r.witness = {{"resistance", resistance}, {"energy", energy}};
  return r;
}

}  // namespace mpllab
