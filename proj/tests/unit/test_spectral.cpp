#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mpllab/error.hpp"
#include "mpllab/spectral.hpp"

using namespace mpllab;

TEST(Gaps, CompleteGraphs) {
  for (int n = 2; n <= 6; ++n) {
    const WeightedGraph g = complete_graph(n);
    EXPECT_NEAR(gap_random_walk(g).gap, n, 1e-12);
    EXPECT_NEAR(gap_interchange(g).gap, n, 1e-10);
    for (int k = 1; k < n; ++k) EXPECT_NEAR(gap_exclusion(g, k).gap, n, 1e-10);
  }
}

TEST(Gaps, PathGraphs) {
  for (int len = 1; len <= 5; ++len) {
    const int n = len + 1;
    const double expected = 2.0 - 2.0 * std::cos(std::numbers::pi / n);
    EXPECT_NEAR(gap_random_walk(path_graph(len)).gap, expected, 1e-12);
    EXPECT_NEAR(gap_interchange(path_graph(len)).gap, expected, 1e-10);
  }
}

TEST(Gaps, SingleEdge) {
  const WeightedGraph g(2, {{0, 1, 3.0}});
  const GapResult r = gap_random_walk(g);
  EXPECT_NEAR(r.gap, 6.0, 1e-14);
  EXPECT_EQ(r.size, 2u);
  EXPECT_EQ(r.zero_multiplicity, 1);
  EXPECT_NEAR(gap_interchange(g).gap, 6.0, 1e-14);
}

// Property: every gap matches a dense eigensolve of the enumerated generator.
TEST(GapProperty, MatchesDenseOracle) {
  for (std::uint64_t i = 0; i < 25; ++i) {
    auto rng = CounterRng::stream(401, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 5);
    const int n = g.vertex_count();
    int zeros = 0;
    const double rw = oracle::smallest_nonzero_eigenvalue(oracle::laplacian(g), &zeros);
    EXPECT_EQ(zeros, 1);
    EXPECT_NEAR(gap_random_walk(g).gap, rw, 1e-10 * rw);
    const double ip = oracle::smallest_nonzero_eigenvalue(oracle::negative_generator(oracle::permutation_space(n), g), &zeros);
    EXPECT_EQ(zeros, 1);
    const GapResult ipr = gap_interchange(g);
    EXPECT_NEAR(ipr.gap, ip, 1e-10 * ip);
    EXPECT_EQ(ipr.zero_multiplicity, 1);
    for (int k = 1; k < n; ++k) {
      const double ex = oracle::smallest_nonzero_eigenvalue(oracle::negative_generator(oracle::sector_space(n, k), g));
      const GapResult exr = gap_exclusion(g, k);
      EXPECT_NEAR(exr.gap, ex, 1e-10 * ex);
      EXPECT_EQ(exr.zero_multiplicity, 1);
      EXPECT_LE(exr.residual, 1e-9);
    }
  }
}

TEST(GapProperty, SingleParticleSectorIsTheRandomWalkBitForBit) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = CounterRng::stream(402, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 9);
    EXPECT_EQ(gap_exclusion(g, 1).gap, gap_random_walk(g).gap);
  }
}

TEST(GapProperty, HomogeneousUnderConductanceScaling) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto rng = CounterRng::stream(403, i);
    const WeightedGraph g = fixtures::random_graph(rng, 3, 5);
    const double t = rng.uniform(0.2, 5.0);
    std::vector<Edge> edges = g.edges();
    for (Edge& e : edges) e.c *= t;
    const WeightedGraph h(g.vertex_count(), edges);
    EXPECT_NEAR(gap_random_walk(h).gap, t * gap_random_walk(g).gap, 1e-11 * t * gap_random_walk(g).gap);
    EXPECT_NEAR(gap_interchange(h).gap, t * gap_interchange(g).gap, 1e-10 * t * gap_interchange(g).gap);
  }
}

TEST(GapProperty, AldousEqualityAndResiduals) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = CounterRng::stream(404, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 6);
    const VerificationReport r = check_aldous(g, 1e-8);
    EXPECT_TRUE(r.pass) << r.margin;
    EXPECT_LE(r.witness.at("max_residual").get<double>(), 1e-9);
  }
}

TEST(Gaps, LanczosAboveTheDenseLimit) {
  auto rng = CounterRng::stream(405, 0);
  const WeightedGraph g = random_connected_graph(rng, 8);
  const GapResult ip = gap_interchange(g);
  EXPECT_EQ(ip.size, 40320u);
  EXPECT_EQ(ip.method, "lanczos");
  const double rw = gap_random_walk(g).gap;
  EXPECT_NEAR(ip.gap, rw, 1e-8 * rw);
  EXPECT_LE(ip.residual, 1e-9);
  EXPECT_NEAR(gap_interchange(complete_graph(8)).gap, 8.0, 1e-8 * 8.0);
}

TEST(Gaps, SizeCapsAndArguments) {
  EXPECT_THROW(gap_interchange(complete_graph(9)), Error);
  EXPECT_THROW(gap_exclusion(complete_graph(4), 0), Error);
  EXPECT_THROW(gap_exclusion(complete_graph(4), 4), Error);
  EXPECT_THROW(gap_random_walk(WeightedGraph(1, {})), Error);
  const auto j = to_json(gap_random_walk(complete_graph(3)));
  for (const char* key : {"kind", "size", "gap", "residual"}) EXPECT_TRUE(j.contains(key));
}
