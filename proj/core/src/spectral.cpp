#include "mpllab/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <lapacke.h>

#include "mpllab/dirichlet.hpp"
#include "mpllab/error.hpp"
#include "mpllab/resistance.hpp"
#include "mpllab/rng.hpp"

namespace mpllab {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Eigenvalues of M below this, relative to its Gershgorin bound, count as zero.
constexpr double kZeroThreshold = 1e-9;

double gershgorin(const SparseMatrix& m) {
  Eigen::VectorXd rows = Eigen::VectorXd::Zero(m.rows());
  for (Eigen::Index c = 0; c < m.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) rows(it.row()) += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

double residual_norm(const SparseMatrix& m, const Eigen::VectorXd& v, double lambda) {
  return (m * v - lambda * v).norm() / v.norm();
}

// Dense -L, assembled edge by edge and state by state in the same order for
// every process so that identical chains give identical matrices.
Eigen::MatrixXd dense_negative_generator(const GeneratorOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.space().size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t e = 0; e < op.graph().edge_count(); ++e) {
    const double c = op.graph().edge(e).c;
    for (Eigen::Index s = 0; s < n; ++s) {
      const auto t = static_cast<Eigen::Index>(op.swap_target(e, static_cast<std::size_t>(s)));
      if (t == s) continue;
      m(s, s) += c;
      m(s, t) -= c;
    }
  }
  return m;
}

struct Eigenpairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Smallest `count` eigenpairs of a dense symmetric matrix (destroyed).
Eigenpairs smallest_dense(Eigen::MatrixXd& a, int count) {
  const auto n = static_cast<lapack_int>(a.rows());
  count = std::min<int>(count, n);
  lapack_int found = 0;
  Eigenpairs out;
  out.values.resize(n);
  out.vectors.resize(n, count);
  std::vector<lapack_int> support(2 * static_cast<std::size_t>(count));
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'U', n, a.data(), n, 0.0, 0.0, 1, count, 0.0, &found,
                     out.values.data(), out.vectors.data(), n, support.data());
  if (info != 0 || found != count) {
    throw Error(ErrorCode::SingularSystem, "dsyevr failed with info " + std::to_string(info));
  }
  out.values.conservativeResize(count);
  return out;
}

GapResult dense_gap(const GeneratorOperator& op, const std::string& kind, const Eigen::MatrixXd& m,
                    const SparseMatrix& sparse) {
  const double bound = gershgorin(sparse);
  const double zero = kZeroThreshold * std::max(1.0, bound);
  int count = std::min<int>(4, static_cast<int>(m.rows()));
  for (;;) {
    Eigen::MatrixXd work = m;
    const Eigenpairs ep = smallest_dense(work, count);
    int zeros = 0;
    while (zeros < ep.values.size() && std::abs(ep.values(zeros)) <= zero) ++zeros;
    if (zeros < ep.values.size()) {
      GapResult r;
      r.kind = kind;
      r.size = op.space().size();
      r.gap = ep.values(zeros);
      r.zero_multiplicity = zeros;
      r.residual = residual_norm(sparse, ep.vectors.col(zeros), r.gap);
      r.method = "dense";
      return r;
    }
    if (count == m.rows()) throw Error(ErrorCode::SingularSystem, "generator has no nonzero eigenvalue");
    count = std::min<int>(2 * count, static_cast<int>(m.rows()));
  }
}

// Lanczos with full reorthogonalization on M restricted to the complement of
// the constants, which span the kernel of a connected chain.
GapResult lanczos_gap(const GeneratorOperator& op, const std::string& kind, const SparseMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  const Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  const double bound = gershgorin(m);
  const int max_steps = static_cast<int>(std::min<Eigen::Index>(n - 1, 600));

  CounterRng rng(0x5eed);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.normal();
  v -= ones.dot(v) * ones;
  v.normalize();

  std::vector<Eigen::VectorXd> basis{v};
  std::vector<double> alpha;
  std::vector<double> beta;
  double theta = 0.0;
  Eigen::VectorXd ritz;
  for (int step = 0; step < max_steps; ++step) {
    Eigen::VectorXd w = m * basis.back();
    alpha.push_back(basis.back().dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      w -= ones.dot(w) * ones;
      for (const Eigen::VectorXd& b : basis) w -= b.dot(w) * b;
    }
    const double b = w.norm();

    const bool check = (step + 1) % 10 == 0 || b <= 1e-12 * bound || step + 1 == max_steps;
    if (check) {
      const auto k = static_cast<Eigen::Index>(alpha.size());
      Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index i = 0; i < k; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      theta = es.eigenvalues()(0);
      const double estimate = b * std::abs(es.eigenvectors()(k - 1, 0));
      if (estimate <= 1e-11 * std::max(1.0, bound) || b <= 1e-12 * bound || step + 1 == max_steps) {
        ritz = Eigen::VectorXd::Zero(n);
        for (Eigen::Index i = 0; i < k; ++i) ritz += es.eigenvectors()(i, 0) * basis[i];
        break;
      }
    }
    beta.push_back(b);
    basis.push_back(w / b);
  }

  GapResult r;
  r.kind = kind;
  r.size = op.space().size();
  r.gap = theta;
  r.zero_multiplicity = 1;
  r.residual = residual_norm(m, ritz, theta);
  r.method = "lanczos";
  if (residual_norm(m, ones, 0.0) > kZeroThreshold * std::max(1.0, bound)) {
    throw Error(ErrorCode::SingularSystem, "constants are not in the kernel of the generator");
  }
  return r;
}

GapResult generator_gap(const GeneratorOperator& op, const std::string& kind) {
  if (op.space().size() < 2) throw Error(ErrorCode::InvalidArgument, "a one-state chain has no spectral gap");
  if (op.space().size() > kSpectralStateLimit) {
    throw Error(ErrorCode::StateSpaceTooLarge,
                op.space().describe() + " exceeds " + std::to_string(kSpectralStateLimit) + " states");
  }
  const SparseMatrix m = -op.matrix();
  if (op.space().size() <= kDenseSpectralLimit) return dense_gap(op, kind, dense_negative_generator(op), m);
  return lanczos_gap(op, kind, m);
}

}  // namespace

GapResult gap_random_walk(const WeightedGraph& g) {
  if (g.vertex_count() < 2) throw Error(ErrorCode::TooFewVertices, "random walk gap needs two vertices");
  // Sector k = 1 is the walk itself: state i is the vertex i.
  const auto op = GeneratorOperator::exclusion_sector(g, 1);
  const Eigen::MatrixXd m = laplacian_matrix(g);
  GapResult r = dense_gap(op, "random-walk", m, -op.matrix());
  return r;
}

GapResult gap_interchange(const WeightedGraph& g) {
  if (g.vertex_count() < 2) throw Error(ErrorCode::TooFewVertices, "interchange gap needs two vertices");
  return generator_gap(GeneratorOperator::interchange(g), "interchange");
}

GapResult gap_exclusion(const WeightedGraph& g, int k) {
  if (k < 1 || k > g.vertex_count() - 1) throw Error(ErrorCode::InvalidArgument, "sector k must lie in [1, n-1]");
  return generator_gap(GeneratorOperator::exclusion_sector(g, k), "exclusion-k" + std::to_string(k));
}

VerificationReport check_aldous(const WeightedGraph& g, double relative_tol) {
  const GapResult rw = gap_random_walk(g);
  const GapResult ip = gap_interchange(g);
  double worst = std::abs(ip.gap - rw.gap);
  double worst_residual = std::max(rw.residual, ip.residual);
  nlohmann::json sectors = nlohmann::json::array();
  for (int k = 1; k < g.vertex_count(); ++k) {
    const GapResult ex = gap_exclusion(g, k);
    worst = std::max(worst, std::abs(ex.gap - rw.gap));
    worst_residual = std::max(worst_residual, ex.residual);
    sectors.push_back({{"k", k}, {"gap", ex.gap}, {"residual", ex.residual}});
  }
  VerificationReport r;
  r.name = "aldous";
  r.lhs = ip.gap;
  r.rhs = rw.gap;
  r.margin = -worst;
  r.tolerance = relative_tol * rw.gap;
  r.pass = r.margin >= -r.tolerance;
  r.instance = {{"n", g.vertex_count()}, {"edges", g.edge_count()}};
  r.witness = {{"gap_random_walk", rw.gap},
               {"gap_interchange", ip.gap},
               {"sectors", sectors},
               {"max_residual", worst_residual}};
  return r;
}

nlohmann::json to_json(const GapResult& r) {
  return {{"kind", r.kind},       {"size", r.size},         {"gap", r.gap},
          {"residual", r.residual}, {"zero_multiplicity", r.zero_multiplicity}, {"method", r.method}};
}

}  // namespace mpllab
