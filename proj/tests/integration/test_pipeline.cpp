#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mpllab/dirichlet.hpp"
#include "mpllab/graph_io.hpp"
#include "mpllab/inequality.hpp"
#include "mpllab/reduction.hpp"
#include "mpllab/sg_graph.hpp"
#include "mpllab/sim.hpp"
#include "mpllab/spectral.hpp"

using namespace mpllab;

namespace {

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "mpllab_pipeline";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

// Repeated single-vertex reduction through files on disk ends at the effective
// conductance.
TEST(Pipeline, FileRoundTripThroughRepeatedReduction) {
  auto rng = CounterRng::stream(601, 0);
  WeightedGraph g = random_connected_graph(rng, 8);
  const double expected = oracle::resistance(g, 0, 1);
  const auto path = scratch() / "reduce.txt";
  while (g.vertex_count() > 2) {
    save_graph(reduce_at(g, g.vertex_count() - 1), path);
    g = load_graph(path);
  }
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_NEAR(1.0 / g.edge(0).c, expected, 1e-12 * expected);
}

// The octopus chain and the moving particle inequality are two views of one bound:
// the last entry of the chain is c_eff/2 nu[(grad_xy f)^2] and the first is E(f).
TEST(Pipeline, EnergyChainGivesTheMovingParticleBound) {
  for (std::uint64_t i = 0; i < 15; ++i) {
    auto rng = CounterRng::stream(602, i);
    const WeightedGraph g = fixtures::random_graph(rng, 3, 6);
    const auto [x, y] = fixtures::random_pair(rng, g);
    const Measure nu = bernoulli_measure(g.vertex_count(), 0.5);
    const auto f = StateFunction::random_normal(nu.space(), rng);
    const auto chain = reduced_energy_chain(g, x, y, nu, f);
    const VerificationReport mpl = check_mpl(g, 0.5, x, y, f, 1e-9);
    const double r = effective_resistance(g, x, y).resistance;
    EXPECT_NEAR(chain.back() * r, mpl.lhs, 1e-10 * std::max(1.0, mpl.lhs));
    EXPECT_NEAR(chain.front() * r, mpl.rhs, 1e-10 * std::max(1.0, mpl.rhs));
    EXPECT_TRUE(mpl.pass);
  }
}

TEST(Pipeline, GasketFromDiskKeepsItsResistanceAndGap) {
  const SgGraph sg = sg_graph(3);
  const auto path = scratch() / "sg3.json";
  {
    std::ofstream out(path);
    out << graph_to_json(sg.graph()).dump();
  }
  const WeightedGraph g = load_graph(path);
  EXPECT_EQ(g.edges(), sg.graph().edges());
  const double expected = 2.0 / 3.0 * std::pow(5.0 / 3.0, 3);
  EXPECT_NEAR(effective_resistance(g, 0, 1).resistance, expected, 1e-11 * expected);
  const double rw = gap_random_walk(g).gap;
  EXPECT_NEAR(rw, oracle::smallest_nonzero_eigenvalue(oracle::laplacian(g)), 1e-10 * rw);
  EXPECT_EQ(gap_exclusion(g, 1).gap, rw);
}

TEST(Pipeline, DrivenGasketStatistics) {
  const SgGraph sg = sg_graph(2);
  SimConfig c;
  c.graph = sg.graph();
  c.alpha = 0.0;
  c.horizon = 50.0;
  c.acceleration = 25.0;
  c.seed = 3;
  c.record_every = 10.0;
  c.boundary = {{0, 2.0, 0.5}, {1, 2.0, 0.5}, {2, 2.0, 0.5}};
  const Trajectory t = simulate(c);
  EXPECT_GT(t.event_count, 0u);
  ASSERT_EQ(t.snapshots.size(), 6u);
  // Reservoirs at density 0.8 fill the empty gasket.
  double late = 0.0;
  for (std::size_t k = 3; k < t.snapshots.size(); ++k) {
    for (auto b : t.snapshots[k].occupancy) late += b;
  }
  late /= 3.0 * sg.graph().vertex_count();
  EXPECT_GT(late, 0.5);
  const LocalFunctionBundle phi = occupation_bundle();
  const double u = time_average_U(t, phi, 7, block_radius(2, 0.5), tabulate_phi(sg.graph(), phi, 7));
  EXPECT_TRUE(std::isfinite(u));
  EXPECT_LE(std::abs(u), 1.0);
}

TEST(Pipeline, StateFunctionsSurviveDisk) {
  auto rng = CounterRng::stream(603, 0);
  const WeightedGraph g = complete_graph(5);
  const auto f = StateFunction::random_normal(SpaceDescriptor::permutation(5), rng);
  const auto path = scratch() / "f.bin";
  {
    std::ofstream out(path, std::ios::binary);
    write_binary(out, f);
  }
  std::ifstream in(path, std::ios::binary);
  const StateFunction back = read_binary(in, f.space());
  const Measure nu = uniform_measure(f.space());
  EXPECT_EQ(energy(g, nu, back), energy(g, nu, f));
  EXPECT_TRUE(check_octopus(g, 2, back, 1e-9).pass);
}
