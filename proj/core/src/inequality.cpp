#include "mpllab/inequality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "mpllab/error.hpp"
#include "mpllab/numeric.hpp"
#include "mpllab/reduction.hpp"
#include "mpllab/resistance.hpp"

namespace mpllab {

namespace {

void check_pair(const WeightedGraph& g, Vertex x, Vertex y) {
  g.check_vertex(x);
  g.check_vertex(y);
  if (x == y) throw Error(ErrorCode::SameVertex, "x and y must differ");
}

void check_space(const WeightedGraph& g, const StateFunction& f, SpaceKind kind, const char* what) {
  if (f.space().kind != kind || f.space().n != g.vertex_count()) {
    throw Error(ErrorCode::SpaceMismatch, std::string(what) + " expects a function on a matching space, got " +
                                              f.space().describe());
  }
}

// Worst report of a batch: smallest margin relative to its scale.
bool worse(const VerificationReport& a, const VerificationReport& b) {
  return a.margin / report_scale(a.lhs, a.rhs) < b.margin / report_scale(b.lhs, b.rhs);
}

double mpl_lhs_rhs(const WeightedGraph& g, const Measure& mu, Vertex x, Vertex y, const StateFunction& f,
                   double& lhs, double& resistance, double& energy_value) {
  lhs = 0.5 * gradient_square_mean(mu, f, x, y);
  resistance = effective_resistance_oracle(g, x, y);
  energy_value = energy(g, mu, f);
  return resistance * energy_value;
}

VerificationReport mpl_report(const char* name, const WeightedGraph& g, const Measure& mu, Vertex x, Vertex y,
                              const StateFunction& f, double relative_tol) {
  double lhs = 0.0, resistance = 0.0, e = 0.0;
  const double rhs = mpl_lhs_rhs(g, mu, x, y, f, lhs, resistance, e);
  auto r = inequality_report(name, lhs, rhs, relative_tol);
  r.instance = {{"n", g.vertex_count()}, {"edges", g.edge_count()}, {"x", x}, {"y", y},
                {"space", f.space().describe()}};
  r.witness = {{"resistance", resistance}, {"energy", e}};
  return r;
}

}  // namespace

VerificationReport check_mpl(const WeightedGraph& g, double alpha, Vertex x, Vertex y, const StateFunction& f,
                             double relative_tol) {
  check_pair(g, x, y);
  check_space(g, f, SpaceKind::Full, "check_mpl");
  auto r = mpl_report("mpl", g, bernoulli_measure(g.vertex_count(), alpha), x, y, f, relative_tol);
  r.instance["alpha"] = alpha;
  return r;
}

VerificationReport check_mpl_sector(const WeightedGraph& g, Vertex x, Vertex y, const StateFunction& f,
                                    double relative_tol) {
  check_pair(g, x, y);
  check_space(g, f, SpaceKind::Sector, "check_mpl_sector");
  auto r = mpl_report("mpl-sector", g, uniform_measure(f.space()), x, y, f, relative_tol);
  r.instance["k"] = f.space().k;
  return r;
}

VerificationReport check_ip_mpl(const WeightedGraph& g, Vertex x, Vertex y, const StateFunction& f,
                                double relative_tol) {
  check_pair(g, x, y);
  check_space(g, f, SpaceKind::Permutation, "check_ip_mpl");
  return mpl_report("ip-mpl", g, uniform_measure(f.space()), x, y, f, relative_tol);
}

VerificationReport check_octopus(const WeightedGraph& g, Vertex x, const StateFunction& f, double relative_tol) {
  g.check_vertex(x);
  check_space(g, f, SpaceKind::Permutation, "check_octopus");
  if (g.degree(x) == 0) throw Error(ErrorCode::InvalidArgument, "vertex has no neighbors");
  const Measure nu = uniform_measure(f.space());

  std::vector<Edge> star;
  for (const Neighbor& nb : g.neighbors(x)) star.push_back({x, nb.vertex, nb.conductance});
  const std::vector<Edge> mesh = star_conductances(g, x);
  // energy() carries the factor 1/2; both sides here are plain sums.
  const double star_side = 2.0 * energy(star, nu, f);
  const double mesh_side = mesh.empty() ? 0.0 : 2.0 * energy(mesh, nu, f);

  auto r = inequality_report("octopus", mesh_side, star_side, relative_tol);
  r.instance = {{"n", g.vertex_count()}, {"edges", g.edge_count()}, {"x", x}};
  r.witness = {{"star", star_side}, {"mesh", mesh_side}, {"mesh_edges", mesh.size()}};
  return r;
}

std::vector<Vertex> shortest_path(const WeightedGraph& g, Vertex x, Vertex y) {
  check_pair(g, x, y);
  const auto dist = hop_distances(g, y);
  if (dist[x] < 0) throw Error(ErrorCode::NoPath, "no path between x and y");
  std::vector<Vertex> path{x};
  Vertex v = x;
  while (v != y) {
    Vertex next = -1;
    // neighbors are sorted by id, so the first closer one is the smallest
    for (const Neighbor& nb : g.neighbors(v)) {
      if (dist[nb.vertex] == dist[v] - 1) {
        next = nb.vertex;
        break;
      }
    }
    path.push_back(next);
    v = next;
  }
  return path;
}

Mask SweepPlan::apply(std::size_t m, Mask zeta) const {
  const VertexMap& s = partial.at(m);
  Mask out = 0;
  for (std::size_t v = 0; v < s.size(); ++v) out |= ((zeta >> s[v]) & 1u) << v;
  return out;
}

SweepPlan path_sweep(const WeightedGraph& g, Vertex x, Vertex y) {
  SweepPlan plan;
  plan.path = shortest_path(g, x, y);
  const int L = plan.length();
  for (int i = 0; i < L; ++i) plan.operators.emplace_back(plan.path[i], plan.path[i + 1]);
  for (int i = L - 1; i >= 1; --i) plan.operators.emplace_back(plan.path[i], plan.path[i - 1]);

  VertexMap s(static_cast<std::size_t>(g.vertex_count()));
  std::iota(s.begin(), s.end(), 0);
  plan.partial.push_back(s);
  for (const auto& [a, b] : plan.operators) {
    std::swap(s[a], s[b]);
    plan.partial.push_back(s);
  }
  return plan;
}

namespace {

struct SweepEval {
  VerificationReport identity;
  VerificationReport cauchy_schwarz;
  bool exact = false;
};

SweepEval evaluate_sweep(const SweepPlan& plan, const StateFunction& f, Mask zeta, double relative_tol) {
  const Vertex x = plan.path.front();
  const Vertex y = plan.path.back();
  const Mask swapped = swap_bits(zeta, x, y);
  ExactSum residual;
  residual.add(f[swapped]);
  residual.subtract(f[zeta]);
  CompensatedSum telescoped;
  CompensatedSum squares;
  for (std::size_t m = 0; m < plan.operators.size(); ++m) {
    const Mask at = plan.apply(m, zeta);
    const Mask next = swap_bits(at, plan.operators[m].first, plan.operators[m].second);
    residual.subtract(f[next]);
    residual.add(f[at]);
    const double term = f[next] - f[at];
    telescoped.add(term);
    squares.add(term * term);
  }
  const double direct = f[swapped] - f[zeta];
  const double factor = static_cast<double>(plan.operators.size());

  SweepEval out;
  out.exact = residual.is_zero();
  out.identity = identity_report("telescoping", direct, telescoped.value(), 0.0);
  out.identity.margin = -std::abs(residual.value());
  out.identity.pass = out.exact;
  out.identity.witness = {{"zeta", zeta}, {"exact_residual", residual.value()}};
  out.cauchy_schwarz = inequality_report("sweep-cauchy-schwarz", direct * direct, factor * squares.value(),
                                         relative_tol);
  out.cauchy_schwarz.witness = {{"zeta", zeta}, {"operators", plan.operators.size()}};
  return out;
}

TelescopingResult sweep_over(const SweepPlan& plan, const StateFunction& f, std::span<const Mask> configs,
                             double relative_tol) {
  if (f.space().kind != SpaceKind::Full || f.space().n != static_cast<int>(plan.partial.front().size())) {
    throw Error(ErrorCode::SpaceMismatch, "telescoping needs a full-space function on the plan's graph");
  }
  TelescopingResult out;
  bool first = true;
  for (Mask zeta : configs) {
    SweepEval e = evaluate_sweep(plan, f, zeta, relative_tol);
    ++out.configurations;
    if (e.exact) ++out.exact_zero;
    if (first || (!e.exact && out.identity.pass) ||
        (e.exact == out.identity.pass && e.identity.margin < out.identity.margin)) {
      out.identity = e.identity;
    }
    if (first || worse(e.cauchy_schwarz, out.cauchy_schwarz)) out.cauchy_schwarz = e.cauchy_schwarz;
    first = false;
  }
  const nlohmann::json instance{{"n", f.space().n},
                                {"path", plan.path},
                                {"length", plan.length()},
                                {"configurations", out.configurations},
                                {"exact_zero", out.exact_zero}};
  out.identity.instance = instance;
  out.cauchy_schwarz.instance = instance;
  return out;
}

}  // namespace

TelescopingResult verify_telescoping(const SweepPlan& plan, const StateFunction& f, double relative_tol) {
  std::vector<Mask> all(f.size());
  std::iota(all.begin(), all.end(), Mask{0});
  return sweep_over(plan, f, all, relative_tol);
}

TelescopingResult verify_telescoping(const SweepPlan& plan, const StateFunction& f, Mask zeta,
                                     double relative_tol) {
  if (zeta >= f.size()) throw Error(ErrorCode::InvalidArgument, "configuration outside the space");
  return sweep_over(plan, f, std::span(&zeta, 1), relative_tol);
}

std::vector<double> edge_energies(const WeightedGraph& g, const Measure& mu, const StateFunction& f) {
  std::vector<double> out;
  out.reserve(g.edge_count());
  for (const Edge& e : g.edges()) out.push_back(gradient_square_mean(mu, f, e.u, e.v));
  return out;
}

StateFunction symmetrize(const TorusGraph& torus, const StateFunction& f) {
  check_space(torus.graph, f, SpaceKind::Full, "symmetrize");
  const std::size_t states = f.size();
  const double group = static_cast<double>(torus.symmetries.size());
  std::vector<double> out(states, 0.0);
  std::vector<char> done(states, 0);
  std::vector<Mask> images(torus.symmetries.size());
  for (Mask zeta = 0; zeta < states; ++zeta) {
    if (done[zeta]) continue;
    CompensatedSum s;
    for (std::size_t gi = 0; gi < torus.symmetries.size(); ++gi) {
      const VertexMap& map = torus.symmetries[gi];
      Mask image = 0;
      for (std::size_t v = 0; v < map.size(); ++v) image |= ((zeta >> v) & 1u) << map[v];
      images[gi] = image;
      s.add(f[image]);
    }
    const double avg = s.value() / group;
    for (Mask image : images) {
      out[image] = avg;
      done[image] = 1;
    }
  }
  return StateFunction(f.space(), std::move(out));
}

ConventionalBound conventional_mpl_bound(const WeightedGraph& g, Vertex x, Vertex y, const StateFunction& f,
                                         double relative_tol) {
  check_pair(g, x, y);
  check_space(g, f, SpaceKind::Full, "conventional_mpl_bound");
  if (!g.has_unit_conductances()) {
    throw Error(ErrorCode::InvalidArgument, "the conventional bound assumes unit conductances");
  }
  const Measure nu = uniform_measure(f.space());
  const double e = energy(g, nu, f);
  if (!(e > 0.0)) throw Error(ErrorCode::ZeroEnergy, "f has zero energy; the per-edge constant is undefined");

  ConventionalBound b;
  b.path_length = static_cast<int>(shortest_path(g, x, y).size()) - 1;
  b.edges = g.edge_count();
  const auto per_edge = edge_energies(g, nu, f);
  const double edges = static_cast<double>(b.edges);
  b.c_min = 0.5 * *std::max_element(per_edge.begin(), per_edge.end()) * edges / e;
  const double L = b.path_length;
  b.lhs = 0.5 * gradient_square_mean(nu, f, x, y);
  b.path_bound = 2.0 * (2.0 * L - 1.0) * L * b.c_min / edges * e;
  b.conventional_bound = b.c_min * 4.0 * L * L / edges * e;
  const double resistance = effective_resistance_oracle(g, x, y);
  b.mpl_bound = resistance * e;
  b.ratio = b.conventional_bound / b.mpl_bound;

  b.report = inequality_report("conventional-mpl", b.lhs, b.conventional_bound, relative_tol);
  b.report.instance = {{"n", g.vertex_count()}, {"edges", b.edges}, {"x", x}, {"y", y}};
  b.report.witness = {{"L", b.path_length},         {"c_min", b.c_min},        {"path_bound", b.path_bound},
                      {"mpl_bound", b.mpl_bound},   {"ratio", b.ratio},        {"resistance", resistance}};
  if (b.mpl_bound > b.conventional_bound * (1.0 + relative_tol)) b.report.note = "conventional bound is tighter";
  return b;
}

VerificationReport check_uniform_edge_energy(const WeightedGraph& g, const StateFunction& f, double relative_tol) {
  check_space(g, f, SpaceKind::Full, "check_uniform_edge_energy");
  const auto per_edge = edge_energies(g, uniform_measure(f.space()), f);
  const auto [lo, hi] = std::minmax_element(per_edge.begin(), per_edge.end());
  const double total = compensated_sum(per_edge);
  auto r = identity_report("assumption-a-equality", *hi, *lo, relative_tol);
  r.instance = {{"n", g.vertex_count()}, {"edges", g.edge_count()}};
  r.witness = {{"c_min", total > 0.0 ? *hi * static_cast<double>(per_edge.size()) / total : 0.0},
               {"max_edge_energy", *hi},
               {"min_edge_energy", *lo}};
  return r;
}

OptimalConstant optimal_constant(const WeightedGraph& g, double alpha, Vertex x, Vertex y, double relative_tol) {
  check_pair(g, x, y);
  const int n = g.vertex_count();
  if (n > kOptimalConstantMaxSites) {
    throw Error(ErrorCode::StateSpaceTooLarge, "optimal_constant is dense over 2^n states; n <= " +
                                                   std::to_string(kOptimalConstantMaxSites));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorCode::DegenerateDenominator, "alpha outside (0,1) makes the denominator form vanish");
  }
  const Measure nu = bernoulli_measure(n, alpha);
  const auto states = static_cast<Eigen::Index>(nu.size());

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(states, states);
  for (const Edge& e : g.edges()) {
    for (Eigen::Index s = 0; s < states; ++s) {
      const auto t = static_cast<Eigen::Index>(swap_bits(static_cast<Mask>(s), e.u, e.v));
      if (t == s) continue;
      const double w = e.c * nu.weight(static_cast<std::size_t>(s));
      a(s, s) += w;
      a(t, t) += w;
      a(s, t) -= w;
      a(t, s) -= w;
    }
  }

  // Orthonormal basis: range of the denominator form first, then its kernel.
  std::vector<Eigen::Index> range_states;
  std::vector<double> range_weights;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(states, states);
  Eigen::Index col = 0;
  const double h = std::sqrt(0.5);
  for (Eigen::Index s = 0; s < states; ++s) {
    const Mask m = static_cast<Mask>(s);
    if (((m >> x) & 1u) && !((m >> y) & 1u)) {
      const auto t = static_cast<Eigen::Index>(swap_bits(m, x, y));
      q(s, col) = h;
      q(t, col) = -h;
      range_states.push_back(s);
      range_weights.push_back(4.0 * nu.weight(static_cast<std::size_t>(s)));
      ++col;
    }
  }
  const Eigen::Index r = col;
  for (Eigen::Index s = 0; s < states; ++s) {
    const Mask m = static_cast<Mask>(s);
    const bool bx = (m >> x) & 1u;
    const bool by = (m >> y) & 1u;
    if (bx && !by) {
      q(s, col) = h;
      q(static_cast<Eigen::Index>(swap_bits(m, x, y)), col) = h;
      ++col;
    } else if (bx == by) {
      q(s, col++) = 1.0;
    }
  }

  const Eigen::MatrixXd ap = q.transpose() * a * q;
  const Eigen::Index kdim = states - r;
  const Eigen::MatrixXd arr = ap.topLeftCorner(r, r);
  const Eigen::MatrixXd ark = ap.topRightCorner(r, kdim);
  const Eigen::MatrixXd akk = ap.bottomRightCorner(kdim, kdim);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> kk(akk);
  const double cutoff = 1e-12 * std::max(1.0, kk.eigenvalues().cwiseAbs().maxCoeff());
  Eigen::VectorXd inv = kk.eigenvalues();
  for (Eigen::Index i = 0; i < inv.size(); ++i) inv(i) = inv(i) > cutoff ? 1.0 / inv(i) : 0.0;
  const Eigen::MatrixXd pinv = kk.eigenvectors() * inv.asDiagonal() * kk.eigenvectors().transpose();

  Eigen::MatrixXd schur = arr - ark * pinv * ark.transpose();
  schur = 0.5 * (schur + schur.transpose()).eval();
  Eigen::VectorXd dinv(r);
  for (Eigen::Index i = 0; i < r; ++i) dinv(i) = 1.0 / std::sqrt(range_weights[i]);
  const Eigen::MatrixXd scaled = dinv.asDiagonal() * schur * dinv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::SingularSystem, "eigensolver failed");

  OptimalConstant out;
  out.inf_j = es.eigenvalues()(0);
  const Eigen::VectorXd u = dinv.asDiagonal() * es.eigenvectors().col(0);
  Eigen::VectorXd coords(states);
  coords.head(r) = u;
  coords.tail(kdim) = -pinv * ark.transpose() * u;
  const Eigen::VectorXd fstar = q * coords;
  out.minimizer = StateFunction(nu.space(), std::vector<double>(fstar.data(), fstar.data() + fstar.size()));
  out.resistance = effective_resistance_oracle(g, x, y);
  out.ratio = out.inf_j * out.resistance;
  out.report = inequality_report("optimal-constant", 1.0 / out.inf_j, out.resistance, relative_tol);
  out.report.instance = {{"n", n}, {"edges", g.edge_count()}, {"x", x}, {"y", y}, {"alpha", alpha}};
  out.report.witness = {{"inf_j", out.inf_j}, {"ratio", out.ratio}};
  return out;
}

}  // namespace mpllab
