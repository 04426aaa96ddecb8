#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mpllab/graph.hpp"
#include "mpllab/report.hpp"

namespace mpllab {

/// Real function on the vertex set, indexed by vertex id.
using VertexFunction = std::vector<double>;

/// Dense linear algebra is used up to this many vertices.
inline constexpr int kDenseSolveLimit = 2000;

/// Conductance Laplacian K with K_vv = sum_w c_vw and K_vw = -c_vw (so -K is
/// the random-walk generator).
Eigen::MatrixXd laplacian_matrix(const WeightedGraph& g);

/// R_eff from the unit-current potential: ground y, solve K' p = e_x with a
/// dense symmetric factorization, R_eff = p(x). Independent of network reduction.
double effective_resistance_oracle(const WeightedGraph& g, Vertex x, Vertex y);

/// All-pairs effective resistance from the grounded inverse.
Eigen::MatrixXd resistance_matrix(const WeightedGraph& g);

/// Sum over edges of c_zw [h(z) - h(w)]^2 (no 1/2).
double el_energy(const WeightedGraph& g, std::span<const double> h);
/// Same sum over an arbitrary edge list on the same vertex ids.
double el_energy(std::span<const Edge> edges, std::span<const double> h);

/// (Lh)(x) = sum_y c_xy [h(y) - h(x)].
double laplacian_at(const WeightedGraph& g, std::span<const double> h, Vertex x);

/// h(x) = 1, h(y) = 0, harmonic elsewhere.
VertexFunction harmonic_extension(const WeightedGraph& g, Vertex x, Vertex y);

/// Local energy identity at x: star energy of f equals the reduced-mesh energy
/// plus [(Lf)(x)]^2 / sum_y c_xy.
VerificationReport check_energy_identity(const WeightedGraph& g, Vertex x, std::span<const double> f,
                                         double relative_tol);

/// [h(x) - h(y)]^2 <= R_eff(x, y) * el_energy(h).
VerificationReport check_dirichlet_principle(const WeightedGraph& g, Vertex x, Vertex y,
                                             std::span<const double> h, double relative_tol);

}  // namespace mpllab
