#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "mpllab/error.hpp"
#include "mpllab/event_queue.hpp"
#include "mpllab/sg_graph.hpp"
#include "mpllab/sim.hpp"

using namespace mpllab;

namespace {

SimConfig config(const WeightedGraph& g, double horizon, std::uint64_t seed) {
  SimConfig c;
  c.graph = g;
  c.horizon = horizon;
  c.seed = seed;
  return c;
}

Occupancy single_particle(int n, Vertex at) {
  Occupancy o(static_cast<std::size_t>(n), 0);
  o[at] = 1;
  return o;
}

}  // namespace

TEST(EventQueue, MatchesAnOrderedSet) {
  auto rng = CounterRng::stream(501, 0);
  const std::size_t channels = 40;
  EventQueue q(channels);
  std::set<std::pair<double, std::size_t>> ref;
  std::vector<double> time(channels, -1.0);
  for (int step = 0; step < 20000; ++step) {
    const std::size_t c = rng.below(channels);
    const auto op = rng.below(3);
    if (op < 2) {
      const double t = rng.uniform01();
      if (time[c] >= 0) ref.erase({time[c], c});
      time[c] = t;
      ref.insert({t, c});
      q.schedule(c, t);
    } else {
      if (time[c] >= 0) ref.erase({time[c], c});
      time[c] = -1.0;
      q.remove(c);
    }
    ASSERT_EQ(q.size(), ref.size());
    for (std::size_t k = 0; k < channels; ++k) ASSERT_EQ(q.contains(k), time[k] >= 0);
    if (!ref.empty()) {
      ASSERT_EQ(q.top_time(), ref.begin()->first);
      ASSERT_EQ(q.top_channel(), ref.begin()->second);
    }
  }
}

TEST(Simulate, ReproducibleFromTheSeed) {
  const WeightedGraph g = sg_graph(2).graph();
  SimConfig c = config(g, 5.0, 9);
  c.boundary = {{0, 1.0, 0.5}, {1, 0.2, 0.3}};
  const Trajectory a = simulate(c);
  const Trajectory b = simulate(c);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].time, b.events[i].time);
    EXPECT_EQ(a.events[i].type, b.events[i].type);
    EXPECT_EQ(a.events[i].index, b.events[i].index);
  }
  c.seed = 10;
  const Trajectory d = simulate(c);
  EXPECT_TRUE(d.events.size() != a.events.size() || d.events.front().time != a.events.front().time);
}

// Property: times increase, every swap moves a particle to an empty site, births and
// deaths happen only at reservoir sites and flip the right way, and without
// reservoirs the particle count never changes.
TEST(SimulateProperty, EventsAreLegal) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    auto rng = CounterRng::stream(502, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 10);
    SimConfig c = config(g, 3.0, i);
    c.alpha = rng.uniform(0.1, 0.9);
    const bool driven = i % 2 == 1;
    if (driven) c.boundary = {{0, 1.5, 0.5}};
    const Trajectory t = simulate(c);
    EXPECT_EQ(t.event_count, t.events.size());
    Occupancy state = t.initial;
    const int count = std::count(state.begin(), state.end(), 1);
    double last = 0.0;
    for (const SimEvent& e : t.events) {
      EXPECT_GT(e.time, last);
      EXPECT_LE(e.time, c.horizon);
      last = e.time;
      switch (e.type) {
        case EventType::Swap: {
          const Edge& edge = g.edge(e.index);
          EXPECT_NE(state[edge.u], state[edge.v]);
          std::swap(state[edge.u], state[edge.v]);
          break;
        }
        case EventType::Birth:
          EXPECT_TRUE(driven);
          EXPECT_EQ(e.index, 0u);
          EXPECT_EQ(state[e.index], 0);
          state[e.index] = 1;
          break;
        case EventType::Death:
          EXPECT_TRUE(driven);
          EXPECT_EQ(state[e.index], 1);
          state[e.index] = 0;
          break;
      }
      if (!driven) { EXPECT_EQ(std::count(state.begin(), state.end(), 1), count); }
    }
    EXPECT_EQ(state, t.final);
  }
}

TEST(Simulate, FullConfigurationIsFrozen) {
  SimConfig c = config(complete_graph(5), 100.0, 1);
  c.alpha = 1.0;
  const Trajectory t = simulate(c);
  EXPECT_EQ(t.event_count, 0u);
  EXPECT_EQ(t.final, Occupancy(5, 1));
}

TEST(Simulate, InvalidConfigurations) {
  SimConfig c = config(path_graph(2), 0.0, 1);
  EXPECT_THROW(simulate(c), Error);
  c.horizon = 1.0;
  c.acceleration = 0.0;
  EXPECT_THROW(simulate(c), Error);
  c.acceleration = 1.0;
  c.boundary = {{0, 1.0, 1.0}, {0, 1.0, 1.0}};
  EXPECT_THROW(simulate(c), Error);
  c.boundary = {{0, -1.0, 1.0}};
  EXPECT_THROW(simulate(c), Error);
  c.boundary = {};
  c.initial = Occupancy{1, 0};
  EXPECT_THROW(simulate(c), Error);
}

// A lone particle is a random walk: the mean jump count and the law at time T match
// the spectral solution of the walk.
TEST(SimulateProperty, LoneParticleIsARandomWalk) {
  const WeightedGraph g(4, {{0, 1, 1.0}, {1, 2, 2.0}, {2, 3, 0.5}});
  const double horizon = 2.0;
  const int replicas = 4000;
  double sum = 0.0, sq = 0.0;
  std::vector<std::uint64_t> endpoint(4, 0);
  for (int r = 0; r < replicas; ++r) {
    SimConfig c = config(g, horizon, static_cast<std::uint64_t>(r));
    c.initial = single_particle(4, 1);
    const Trajectory t = simulate(c);
    const double jumps = static_cast<double>(t.event_count);
    sum += jumps;
    sq += jumps * jumps;
    ++endpoint[std::find(t.final.begin(), t.final.end(), 1) - t.final.begin()];
  }
  const double mean = sum / replicas;
  const double se = std::sqrt((sq / replicas - mean * mean) / replicas);
  EXPECT_NEAR(mean, oracle::expected_jumps(g, 1, horizon), 4.0 * se);
  const Eigen::VectorXd p = oracle::walk_distribution(g, 1, horizon);
  const std::vector<double> probs(p.data(), p.data() + p.size());
  EXPECT_TRUE(chi_square_test(endpoint, probs, 1e-3).pass);
}

TEST(Simulate, AccelerationRescalesTime) {
  const WeightedGraph g = complete_graph(4);
  SimConfig slow = config(g, 5.0, 3);
  SimConfig fast = config(g, 1.0, 3);
  fast.acceleration = 5.0;
  const Trajectory a = simulate(slow);
  const Trajectory b = simulate(fast);
  ASSERT_EQ(a.events.size(), b.events.size());
  EXPECT_EQ(a.initial, b.initial);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].index, b.events[i].index);
    EXPECT_NEAR(a.events[i].time, 5.0 * b.events[i].time, 1e-9);
  }
}

TEST(Simulate, AccelerationLeavesBoundaryRatesAlone) {
  SimConfig slow = config(WeightedGraph(1, {}), 20.0, 8);
  slow.boundary = {{0, 1.5, 0.5}};
  SimConfig fast = slow;
  fast.acceleration = 7.0;
  const Trajectory a = simulate(slow);
  const Trajectory b = simulate(fast);
  ASSERT_GT(a.events.size(), 0u);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].type, b.events[i].type);
    EXPECT_EQ(a.events[i].time, b.events[i].time);
  }
}

TEST(Simulate, SnapshotsMatchTheReplay) {
  SimConfig c = config(sg_graph(1).graph(), 4.0, 2);
  c.record_every = 0.5;
  const Trajectory t = simulate(c);
  ASSERT_EQ(t.snapshots.size(), 9u);
  TrajectoryCursor cursor(t);
  for (std::size_t k = 0; k < t.snapshots.size(); ++k) {
    EXPECT_EQ(t.snapshots[k].time, 0.5 * static_cast<double>(k));
    cursor.advance_to(t.snapshots[k].time);
    EXPECT_EQ(cursor.occupancy(), t.snapshots[k].occupancy);
  }
}

TEST(Statistics, OccupationTimesSumToTheHorizon) {
  const Trajectory t = simulate(config(complete_graph(4), 7.5, 5));
  const auto occ = occupation_times(t);
  double total = 0.0;
  for (double x : occ) total += x;
  EXPECT_NEAR(total, 7.5, 1e-12);
  for (std::size_t m = 0; m < occ.size(); ++m)
    if (occ[m] > 0) { EXPECT_EQ(std::popcount(m), std::count(t.initial.begin(), t.initial.end(), 1)); }
}

// One long trajectory inside a sector equidistributes over its configurations.
TEST(Statistics, SectorOccupationIsUniform) {
  SimConfig c = config(complete_graph(4), 2000.0, 6);
  c.initial = Occupancy{1, 1, 0, 0};
  const auto occ = occupation_times(simulate(c));
  for (std::size_t m = 0; m < occ.size(); ++m) {
    if (std::popcount(m) == 2) {
      EXPECT_NEAR(occ[m] / 2000.0, 1.0 / 6.0, 0.02);
    } else {
      EXPECT_EQ(occ[m], 0.0);
    }
  }
}

// Detailed balance: zeta -> zeta^{xy} and back occur equally often.
TEST(Statistics, TransitionFluxIsSymmetric) {
  SimConfig c = config(path_graph(3), 3000.0, 7);
  c.initial = Occupancy{1, 0, 1, 0};
  const auto counts = transition_counts(simulate(c));
  const std::size_t s = 16;
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = a + 1; b < s; ++b) {
      const double ab = static_cast<double>(counts[a * s + b]);
      const double ba = static_cast<double>(counts[b * s + a]);
      EXPECT_LE(std::abs(ab - ba), 4.0 * std::sqrt(ab + ba) + 2.0);
    }
  }
}

TEST(Statistics, BlockAverages) {
  const WeightedGraph g = sg_graph(2).graph();
  const Trajectory t = simulate(config(g, 10.0, 8));
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(0.5 * i);
  const double density = static_cast<double>(std::count(t.initial.begin(), t.initial.end(), 1)) / g.vertex_count();
  for (double v : empirical_block_average(t, 3, 100, times)) EXPECT_EQ(v, density);
  const auto site = empirical_block_average(t, 3, 1, times);
  TrajectoryCursor cursor(t);
  for (std::size_t i = 0; i < times.size(); ++i) {
    cursor.advance_to(times[i]);
    EXPECT_EQ(site[i], cursor.occupancy()[3]);
  }
  EXPECT_THROW(empirical_block_average(t, 3, 0, times), Error);
}

TEST(Statistics, StationaryBlockMeanIsAlpha) {
  const WeightedGraph g = complete_graph(6);
  const double alpha = 0.3;
  const int replicas = 2000;
  double sum = 0.0, sq = 0.0;
  for (int r = 0; r < replicas; ++r) {
    SimConfig c = config(g, 1.0, static_cast<std::uint64_t>(1000 + r));
    c.alpha = alpha;
    const double v = empirical_block_average(simulate(c), 0, 2, std::vector<double>{1.0})[0];
    sum += v;
    sq += v * v;
  }
  const double mean = sum / replicas;
  const double se = std::sqrt((sq / replicas - mean * mean) / replicas);
  EXPECT_NEAR(mean, alpha, 3.0 * se);
}

TEST(LocalFunctions, PhiTablesAreExact) {
  const WeightedGraph g = sg_graph(2).graph();
  for (Vertex x : {0, 4, 9}) {
    const PhiPolynomial occ = tabulate_phi(g, occupation_bundle(), x);
    EXPECT_EQ(occ.coefficients, (std::vector<double>{0.0, 1.0}));
    for (double a : {0.0, 0.125, 0.3, 0.5, 0.9, 1.0}) EXPECT_EQ(occ(a), a);
    const PhiPolynomial pair = tabulate_phi(g, neighbor_product_bundle(g), x);
    EXPECT_EQ(pair.coefficients, (std::vector<double>{0.0, 0.0, 1.0}));
    for (double a : {0.25, 0.5, 0.75}) EXPECT_EQ(pair(a), a * a);
  }
  EXPECT_EQ(block_radius(2, 0.5), 2);
  EXPECT_EQ(block_radius(6, 0.5), 8);
  EXPECT_EQ(block_radius(3, 0.0), 1);
}

TEST(LocalFunctions, TimeAverageIsExactBetweenEvents) {
  const WeightedGraph g = sg_graph(2).graph();
  const Trajectory t = simulate(config(g, 20.0, 4));
  const Vertex x = 5;
  const LocalFunctionBundle phi = neighbor_product_bundle(g);
  const PhiPolynomial table = tabulate_phi(g, phi, x);
  const int radius = block_radius(2, 0.5);
  // Reference: integrate the same piecewise-constant integrand by hand.
  const Vertex y = g.neighbors(x).front().vertex;
  const auto block = ball(g, x, radius);
  auto u = [&](const Occupancy& s) {
    double count = 0;
    for (Vertex z : block) count += s[z];
    const double a = count / static_cast<double>(block.size());
    return s[x] * s[y] - a * a;
  };
  TrajectoryCursor cursor(t);
  long double acc = 0.0L;
  double now = 0.0;
  while (!cursor.at_end()) {
    const double next = cursor.next_time();
    acc += static_cast<long double>(u(cursor.occupancy())) * (next - now);
    now = next;
    cursor.step();
  }
  acc += static_cast<long double>(u(cursor.occupancy())) * (t.horizon - now);
  EXPECT_NEAR(time_average_U(t, phi, x, radius, table), static_cast<double>(acc / t.horizon), 1e-13);
  // phi = eta(x) against the one-site block: U vanishes identically.
  EXPECT_EQ(time_average_U(t, occupation_bundle(), x, 1, tabulate_phi(g, occupation_bundle(), x)), 0.0);
}

TEST(Output, CsvAndSummary) {
  SimConfig c = config(path_graph(3), 2.0, 1);
  c.boundary = {{0, 2.0, 1.0}};
  const Trajectory t = simulate(c);
  std::ostringstream out;
  write_events_csv(out, t);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "time,type,index");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, t.events.size());
  const auto s = trajectory_summary(t);
  EXPECT_EQ(s.at("events").get<std::uint64_t>(), t.event_count);
  EXPECT_EQ(s.at("swaps").get<std::uint64_t>() + s.at("births").get<std::uint64_t>() +
                s.at("deaths").get<std::uint64_t>(),
            t.event_count);
}

TEST(ChiSquare, KnownValues) {
  const std::vector<std::uint64_t> exact{10, 20, 30};
  const std::vector<double> p{1.0 / 6.0, 1.0 / 3.0, 0.5};
  const auto r = chi_square_test(exact, p, 1e-3);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_EQ(r.dof, 2);
  EXPECT_NEAR(r.p_value, 1.0, 1e-12);
  const std::vector<std::uint64_t> skew{30, 10};
  const std::vector<double> half{0.5, 0.5};
  const auto s = chi_square_test(skew, half, 1e-3);
  EXPECT_NEAR(s.statistic, 10.0, 1e-12);
  EXPECT_NEAR(s.p_value, std::erfc(std::sqrt(5.0)), 1e-12);
  EXPECT_TRUE(s.pass);
  EXPECT_FALSE(chi_square_test(skew, half, 0.01).pass);
  const std::vector<std::uint64_t> impossible{1, 1};
  const std::vector<double> degenerate{1.0, 0.0};
  const auto z = chi_square_test(impossible, degenerate, 1e-3);
  EXPECT_EQ(z.p_value, 0.0);
  EXPECT_FALSE(z.pass);
}

TEST(ChiSquare, StationaritySmallRun) {
  const auto r = stationarity_test(complete_graph(4), 0.5, 10.0, 400, 3, 1e-3);
  EXPECT_EQ(r.samples, 400u);
  EXPECT_EQ(r.dof, 15);
  EXPECT_TRUE(r.pass) << r.p_value;
}
