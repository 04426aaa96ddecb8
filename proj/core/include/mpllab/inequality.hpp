#pragma once

#include <vector>

#include "mpllab/dirichlet.hpp"
#include "mpllab/graph.hpp"
#include "mpllab/report.hpp"
#include "mpllab/state_function.hpp"
#include "mpllab/torus.hpp"

namespace mpllab {

/// (1/2) nu_alpha[(grad_xy f)^2] <= R_eff(x, y) E^EX_{nu_alpha}(f), f on {0,1}^V.
VerificationReport check_mpl(const WeightedGraph& g, double alpha, Vertex x, Vertex y, const StateFunction& f,
                             double relative_tol);
/// Same inequality inside one sector under the uniform nu_k.
VerificationReport check_mpl_sector(const WeightedGraph& g, Vertex x, Vertex y, const StateFunction& f,
                                    double relative_tol);
/// Interchange version under the uniform nu on permutations.
VerificationReport check_ip_mpl(const WeightedGraph& g, Vertex x, Vertex y, const StateFunction& f,
                                double relative_tol);

/// Star side sum_y c_xy nu[(grad_xy f)^2] (reported as rhs) against the mesh side
/// sum over neighbor pairs of c^{*,x}_yz nu[(grad_yz f)^2] (lhs).
VerificationReport check_octopus(const WeightedGraph& g, Vertex x, const StateFunction& f, double relative_tol);

/// Hop-count shortest path x = p_0, ..., p_L = y; among shortest paths the
/// lexicographically smallest vertex sequence.
std::vector<Vertex> shortest_path(const WeightedGraph& g, Vertex x, Vertex y);

/// Edge-wise swaps along a path, forward then back: D_1..D_{2L-1}, with
/// T_1 = id and T_{m+1} = D_m T_m.
struct SweepPlan {
  std::vector<Vertex> path;
  std::vector<std::pair<Vertex, Vertex>> operators;
  /// partial[m] is a vertex map s with (T_{m+1} zeta)(v) = zeta(s[v]).
  std::vector<VertexMap> partial;

  int length() const noexcept { return static_cast<int>(path.size()) - 1; }
  /// T_{m+1} zeta for m = 0..2L-1 (m = 2L-1 gives zeta^{xy}).
  Mask apply(std::size_t m, Mask zeta) const;
};

SweepPlan path_sweep(const WeightedGraph& g, Vertex x, Vertex y);

struct TelescopingResult {
  /// Worst configuration; residual computed exactly, tolerance zero.
  VerificationReport identity;
  /// Worst configuration of [grad_xy f]^2 <= (2L-1) sum_m [grad f(T_m zeta)]^2.
  VerificationReport cauchy_schwarz;
  std::size_t configurations = 0;
  std::size_t exact_zero = 0;
};

/// Checks every configuration in f's full space.
TelescopingResult verify_telescoping(const SweepPlan& plan, const StateFunction& f, double relative_tol);
/// Checks one configuration.
TelescopingResult verify_telescoping(const SweepPlan& plan, const StateFunction& f, Mask zeta,
                                     double relative_tol);

/// nu[(grad_e f)^2] for each graph edge, in edge order.
std::vector<double> edge_energies(const WeightedGraph& g, const Measure& mu, const StateFunction& f);

/// Orbit average of f over the torus symmetry group acting on configurations.
StateFunction symmetrize(const TorusGraph& torus, const StateFunction& f);

struct ConventionalBound {
  int path_length = 0;
  std::size_t edges = 0;
  /// Smallest C in the per-edge energy assumption for this f.
  double c_min = 0.0;
  double lhs = 0.0;
  /// 2(2L-1)L C/|E| E(f) and the cruder C 4L^2/|E| E(f).
  double path_bound = 0.0;
  double conventional_bound = 0.0;
  /// R_eff(x, y) E(f).
  double mpl_bound = 0.0;
  /// conventional_bound / mpl_bound.
  double ratio = 0.0;
  VerificationReport report;
};

/// Conventional path-argument bound under the uniform measure on {0,1}^V, for
/// unit conductances. Throws ZeroEnergy if E(f) = 0.
ConventionalBound conventional_mpl_bound(const WeightedGraph& g, Vertex x, Vertex y, const StateFunction& f,
                                         double relative_tol);

/// Edge energies of a symmetrized function agree: max against min as an identity.
VerificationReport check_uniform_edge_energy(const WeightedGraph& g, const StateFunction& f, double relative_tol);

struct OptimalConstant {
  double inf_j = 0.0;
  StateFunction minimizer;
  double resistance = 0.0;
  /// inf J * R_eff, at least 1 up to rounding.
  double ratio = 0.0;
  /// 1 / inf J <= R_eff.
  VerificationReport report;
};

/// Largest full space handled by optimal_constant.
inline constexpr int kOptimalConstantMaxSites = 10;

/// inf over f of 2 E^EX_{nu_alpha}(f) / nu_alpha[(grad_xy f)^2] by a restricted
/// generalized eigenproblem.
OptimalConstant optimal_constant(const WeightedGraph& g, double alpha, Vertex x, Vertex y, double relative_tol);

}  // namespace mpllab
