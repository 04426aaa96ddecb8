#include <cmath>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mpllab/dirichlet.hpp"
#include "mpllab/error.hpp"

using namespace mpllab;

namespace {

struct Case {
  SpaceDescriptor space;
  oracle::Space ref;
  Measure mu;
  GeneratorOperator op;
};

Case make_case(const WeightedGraph& g, SpaceKind kind, int k, double alpha) {
  const int n = g.vertex_count();
  switch (kind) {
    case SpaceKind::Full:
      return {SpaceDescriptor::full(n), oracle::full_space(n, alpha), bernoulli_measure(n, alpha),
              GeneratorOperator::exclusion_full(g)};
    case SpaceKind::Sector:
      return {SpaceDescriptor::sector(n, k), oracle::sector_space(n, k),
              uniform_measure(SpaceDescriptor::sector(n, k)), GeneratorOperator::exclusion_sector(g, k)};
    case SpaceKind::Permutation:
      break;
  }
  return {SpaceDescriptor::permutation(n), oracle::permutation_space(n), uniform_measure(SpaceDescriptor::permutation(n)),
          GeneratorOperator::interchange(g)};
}

std::vector<Case> random_cases(CounterRng& rng, const WeightedGraph& g) {
  const int n = g.vertex_count();
  std::vector<Case> out;
  out.push_back(make_case(g, SpaceKind::Full, 0, rng.uniform(0.05, 0.95)));
  out.push_back(make_case(g, SpaceKind::Sector, static_cast<int>(rng.below(n + 1)), 0.0));
  out.push_back(make_case(g, SpaceKind::Permutation, 0, 0.0));
  return out;
}

}  // namespace

TEST(Generator, KindsAndSpaces) {
  const WeightedGraph g = complete_graph(4);
  EXPECT_EQ(GeneratorOperator::exclusion_full(g).space(), SpaceDescriptor::full(4));
  EXPECT_EQ(GeneratorOperator::exclusion_sector(g, 2).space(), SpaceDescriptor::sector(4, 2));
  EXPECT_EQ(GeneratorOperator::interchange(g).kind(), GeneratorKind::Interchange);
  EXPECT_STREQ(to_string(GeneratorKind::ExclusionSector), "exclusion-sector");
}

// Property: energies match the brute-force enumeration on all three spaces.
TEST(DirichletProperty, EnergyMatchesEnumeration) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    auto rng = CounterRng::stream(201, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 5);
    for (const Case& c : random_cases(rng, g)) {
      const auto f = StateFunction::random_normal(c.space, rng);
      const double expected = oracle::energy(c.ref, g, fixtures::values(f));
      const double scale = std::max(1.0, expected);
      EXPECT_NEAR(energy(g, c.mu, f), expected, 1e-12 * scale) << c.space.describe();
      if (c.space.kind == SpaceKind::Sector || c.space.kind == SpaceKind::Permutation) {
        EXPECT_NEAR(energy_generator_form(c.op, c.mu, f), expected, 1e-11 * scale) << c.space.describe();
      }
      const auto [x, y] = fixtures::random_pair(rng, g);
      EXPECT_NEAR(gradient_square_mean(c.mu, f, x, y), oracle::gradient_square(c.ref, fixtures::values(f), x, y),
                  1e-12 * scale);
    }
  }
}

TEST(DirichletProperty, GeneratorFormIsTheEnergyUnderProductMeasures) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    auto rng = CounterRng::stream(202, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 6);
    const double alpha = rng.uniform(0.05, 0.95);
    const auto op = GeneratorOperator::exclusion_full(g);
    const Measure nu = bernoulli_measure(g.vertex_count(), alpha);
    const auto f = StateFunction::random_normal(op.space(), rng);
    const double e = energy(g, nu, f);
    EXPECT_NEAR(energy_generator_form(op, nu, f), e, 1e-11 * std::max(1.0, e));
  }
}

// Property: L is symmetric (the swap chain is reversible for the uniform and product
// measures), annihilates constants and agrees with the matrix-free apply.
TEST(DirichletProperty, MatrixStructure) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = CounterRng::stream(203, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 5);
    for (const Case& c : random_cases(rng, g)) {
      const Eigen::SparseMatrix<double> l = c.op.matrix();
      const Eigen::MatrixXd dense(l);
      EXPECT_LT((dense - dense.transpose()).cwiseAbs().maxCoeff(), 1e-14);
      EXPECT_LT(dense.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT((dense + oracle::negative_generator(c.ref, g)).cwiseAbs().maxCoeff(), 1e-12);
      const auto f = StateFunction::random_normal(c.space, rng);
      const StateFunction lf = apply_generator(c.op, f);
      const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(f.values().data(), f.size());
      const Eigen::VectorXd mv = l * v;
      for (std::size_t s = 0; s < f.size(); ++s) EXPECT_NEAR(lf[s], mv(s), 1e-12);
    }
  }
}

TEST(Dirichlet, ConstantsHaveZeroEnergy) {
  const WeightedGraph g = complete_graph(4);
  const auto f = StateFunction::constant(SpaceDescriptor::full(4), 3.0);
  EXPECT_EQ(energy(g, bernoulli_measure(4, 0.3), f), 0.0);
  // Functions of the particle count are invariant too.
  std::vector<double> v(16);
  for (std::size_t s = 0; s < 16; ++s) v[s] = std::popcount(s) * 1.5;
  EXPECT_EQ(energy(g, bernoulli_measure(4, 0.3), StateFunction(SpaceDescriptor::full(4), v)), 0.0);
}

TEST(Dirichlet, GradientOfSingleSiteIndicator) {
  // f = eta(0) on {0,1}^2: grad_01 f = eta(1) - eta(0).
  std::vector<double> v{0.0, 1.0, 0.0, 1.0};
  const StateFunction f(SpaceDescriptor::full(2), v);
  const StateFunction d = gradient_xy(f, 0, 1);
  EXPECT_EQ(d[0], 0.0);
  EXPECT_EQ(d[1], -1.0);
  EXPECT_EQ(d[2], 1.0);
  EXPECT_EQ(d[3], 0.0);
  EXPECT_NEAR(gradient_square_mean(bernoulli_measure(2, 0.25), f, 0, 1), 2 * 0.25 * 0.75, 1e-16);
}

TEST(Dirichlet, BoundaryGeneratorHasNoDirichletForm) {
  const WeightedGraph g = path_graph(2);
  const auto op = GeneratorOperator::boundary(g, {{0, 1.0, 2.0}});
  EXPECT_THROW(energy_generator_form(op, bernoulli_measure(3, 0.5), StateFunction::zeros(op.space())), Error);
  EXPECT_THROW(GeneratorOperator::boundary(g, {{0, -1.0, 0.0}}), Error);
  EXPECT_THROW(GeneratorOperator::boundary(g, {{5, 1.0, 1.0}}), Error);
}

// With a common reservoir density rho = birth / (birth + death), nu_rho is invariant.
TEST(Dirichlet, BoundaryDriveWithCommonDensityKeepsProductMeasure) {
  const WeightedGraph g = path_graph(3);
  const double rho = 0.3;
  const auto op = GeneratorOperator::boundary(g, {{0, 0.3, 0.7}, {3, 0.9, 2.1}});
  const Eigen::MatrixXd l(op.matrix());
  const Measure nu = bernoulli_measure(4, rho);
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(nu.weights().data(), nu.size());
  EXPECT_LT((w.transpose() * l).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(l.rowwise().sum().cwiseAbs().maxCoeff(), 1e-14);
  const auto reservoir_only = GeneratorOperator::boundary(g, {{0, 1.0, 1.0}}, false);
  const Eigen::MatrixXd b(reservoir_only.matrix());
  EXPECT_EQ((b.array() != 0.0).count(), 32);
}

TEST(Sectors, ProjectAndAssembleAreInverse) {
  auto rng = CounterRng::stream(204, 0);
  const auto f = StateFunction::random_normal(SpaceDescriptor::full(6), rng);
  std::vector<StateFunction> parts;
  for (int k = 0; k <= 6; ++k) {
    parts.push_back(project_sector(f, k));
    EXPECT_EQ(parts.back().space(), SpaceDescriptor::sector(6, k));
  }
  const StateFunction back = assemble_sectors(parts);
  EXPECT_TRUE(std::equal(back.values().begin(), back.values().end(), f.values().begin()));
}

// Property: the three expressions of the energy (product measure, sector sum, lifted
// interchange sum) agree and each sector term matches the enumeration.
TEST(DecompositionProperty, ThreeExpressionsAgree) {
  static constexpr double kAlphas[] = {0.25, 0.5, 0.75};
  for (std::uint64_t i = 0; i < 40; ++i) {
    auto rng = CounterRng::stream(205, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 6);
    const int n = g.vertex_count();
    const double alpha = kAlphas[i % 3];
    const auto f = StateFunction::random_normal(SpaceDescriptor::full(n), rng);
    const EnergyDecomposition d = decompose_energy(g, alpha, f);
    const double expected = oracle::energy(oracle::full_space(n, alpha), g, fixtures::values(f));
    const double tol = 1e-10 * std::max(1.0, expected);
    EXPECT_NEAR(d.total, expected, tol);
    EXPECT_NEAR(d.sector_sum, expected, tol);
    ASSERT_TRUE(d.lifted_sum.has_value());
    EXPECT_NEAR(*d.lifted_sum, expected, tol);
    ASSERT_EQ(d.sectors.size(), static_cast<std::size_t>(n + 1));
    for (const SectorEnergy& s : d.sectors) {
      const auto fk = project_sector(f, s.k);
      EXPECT_NEAR(s.energy, oracle::energy(oracle::sector_space(n, s.k), g, fixtures::values(fk)),
                  1e-11 * std::max(1.0, s.energy));
    }
    const auto j = to_json(d);
    EXPECT_EQ(j.at("sectors").size(), static_cast<std::size_t>(n + 1));
  }
}

// Property: lifting through pi_k preserves the energy.
TEST(DecompositionProperty, ProjectionPreservesEnergy) {
  for (std::uint64_t i = 0; i < 40; ++i) {
    auto rng = CounterRng::stream(206, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 6);
    const int n = g.vertex_count();
    const int k = static_cast<int>(rng.below(n + 1));
    const auto f = StateFunction::random_normal(SpaceDescriptor::sector(n, k), rng);
    const double sector = energy(g, uniform_measure(f.space()), f);
    const StateFunction lifted = lift_function(f);
    const double perm = oracle::energy(oracle::permutation_space(n), g, fixtures::values(lifted));
    EXPECT_NEAR(perm, sector, 1e-10 * std::max(1.0, sector));
  }
}

TEST(ReducedChain, ProcessVersionEndsAtTheEffectiveConductance) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    auto rng = CounterRng::stream(207, i);
    const WeightedGraph g = fixtures::random_graph(rng, 3, 6);
    const auto [x, y] = fixtures::random_pair(rng, g);
    const Measure nu = uniform_measure(SpaceDescriptor::permutation(g.vertex_count()));
    const auto f = StateFunction::random_normal(nu.space(), rng);
    const auto chain = reduced_energy_chain(g, x, y, nu, f);
    ASSERT_EQ(chain.size(), static_cast<std::size_t>(g.vertex_count() - 1));
    EXPECT_NEAR(chain.front(), energy(g, nu, f), 1e-12 * std::max(1.0, chain.front()));
    for (std::size_t s = 1; s < chain.size(); ++s) EXPECT_LE(chain[s], chain[s - 1] * (1 + 1e-10) + 1e-14);
    const double last = 0.5 / oracle::resistance(g, x, y) *
                        oracle::gradient_square(oracle::permutation_space(g.vertex_count()), fixtures::values(f), x, y);
    EXPECT_NEAR(chain.back(), last, 1e-10 * std::max(1.0, last));
  }
}
