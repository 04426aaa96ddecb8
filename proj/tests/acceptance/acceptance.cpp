// Acceptance run: every criterion at its stated tolerance and time budget.
// Prints one line per criterion and exits nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mpllab/batch.hpp"
#include "mpllab/inequality.hpp"
#include "mpllab/reduction.hpp"
#include "mpllab/sg_scaling.hpp"
#include "mpllab/sim.hpp"
#include "mpllab/spectral.hpp"
#include "mpllab/state_function.hpp"
#include "mpllab/torus.hpp"
#include "oracles.hpp"

namespace {

using namespace mpllab;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

struct Criterion {
  int id;
  std::string description;
  double limit_seconds;
  std::function<void(Outcome&)> run;
};

BatchResult batch(const std::string& selector, std::size_t trials, std::uint64_t seed = 1) {
  BatchOptions opts;
  opts.seed = seed;
  opts.trials = trials;
  return run_batch(selector, opts);
}

std::size_t count_named(const BatchResult& r, const std::string& name) {
  return static_cast<std::size_t>(
      std::count_if(r.reports.begin(), r.reports.end(), [&](const VerificationReport& v) { return v.name == name; }));
}

void require_batch(Outcome& o, const BatchResult& r, std::size_t min_reports) {
  std::size_t failed = 0;
  for (const auto& v : r.reports) failed += v.pass ? 0 : 1;
  o.require(failed == 0, std::to_string(failed) + " of " + std::to_string(r.reports.size()) + " " + r.selector +
                             " reports failed");
  o.require(r.reports.size() >= min_reports, r.selector + " produced only " + std::to_string(r.reports.size()) +
                                                 " reports");
  if (o.pass) {
    if (!o.detail.str().empty()) o.detail << ", ";
    o.detail << r.reports.size() << ' ' << r.selector << " reports";
  }
}

// Two-vertex network with conductance c.
WeightedGraph edge_graph(double c) { return WeightedGraph(2, {{0, 1, c}}); }

void resistance_criterion(Outcome& o) {
  double worst = 0.0;
  std::size_t pairs = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    CounterRng rng = CounterRng::stream(20261014, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 12);
    const Eigen::MatrixXd r = oracle::resistance_matrix(g);
    for (Vertex x = 0; x < g.vertex_count(); ++x) {
      for (Vertex y = x + 1; y < g.vertex_count(); ++y) {
        const double reduced = effective_resistance(g, x, y).resistance;
        worst = std::max(worst, std::abs(reduced - r(x, y)) / r(x, y));
        ++pairs;
      }
    }
  }
  o.require(worst <= 1e-9, "relative deviation " + std::to_string(worst));
  const BatchResult b = batch("resistance", 200);
  require_batch(o, b, 200);
  o.detail << ", " << pairs << " oracle pairs, worst relative deviation " << worst;
}

void mpl_criterion(Outcome& o) {
  const BatchResult b = batch("mpl", 500);
  require_batch(o, b, 1000);
  o.require(count_named(b, "mpl") == 500, "expected 500 full-space reports");
  o.require(count_named(b, "mpl-sector") >= 500, "expected sector reports for every instance");
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    CounterRng rng = CounterRng::stream(77, i);
    const WeightedGraph g = edge_graph(std::exp(rng.uniform(-2.0, 2.0)));
    const double alpha = rng.uniform(0.05, 0.95);
    const auto f = StateFunction::random_normal(SpaceDescriptor::full(2), rng);
    const VerificationReport r = check_mpl(g, alpha, 0, 1, f, 1e-12);
    worst = std::max(worst, std::abs(r.lhs - r.rhs) / report_scale(r.lhs, r.rhs));
  }
  o.require(worst <= 1e-12, "two-vertex equality off by " + std::to_string(worst));
  o.detail << ", two-vertex worst relative gap " << worst;
}

void projection_criterion(Outcome& o) {
  const BatchResult p = batch("projection-4.7", 200);
  require_batch(o, p, 200);
  const BatchResult d = batch("decomposition-4.9", 200);
  require_batch(o, d, 200);
  std::size_t missing = 0;
  for (const auto& r : d.reports) missing += r.witness.contains("lifted_sum") ? 0 : 1;
  o.require(missing == 0, std::to_string(missing) + " decompositions without the lifted sum");
}

void sweep_criterion(Outcome& o) {
  const BatchResult b = batch("sweep", 1000);
  require_batch(o, b, 2000);
  std::size_t nonzero = 0;
  for (const auto& r : b.reports)
    if (r.name == "telescoping" && r.margin != 0.0) ++nonzero;
  o.require(nonzero == 0, std::to_string(nonzero) + " telescoping margins not exactly zero");
  o.require(count_named(b, "telescoping") == 1000 && count_named(b, "sweep-cauchy-schwarz") == 1000,
            "missing sweep reports");
}

void assumption_criterion(Outcome& o) {
  const BatchResult b = batch("assumption-a", 30);
  require_batch(o, b, 90);
  bool tori[3] = {false, false, false};
  for (const auto& r : b.reports) {
    if (!r.instance.contains("dimension")) continue;
    const int d = r.instance.at("dimension"), side = r.instance.at("side");
    tori[0] |= d == 1 && side == 4;
    tori[1] |= d == 1 && side == 6;
    tori[2] |= d == 2 && side == 3;
  }
  o.require(tori[0] && tori[1] && tori[2], "not every torus was covered");
}

void optimal_criterion(Outcome& o) {
  BatchOptions opts;
  opts.trials = 100;
  opts.alpha = 0.5;
  const BatchResult b = run_batch("optimal", opts);
  require_batch(o, b, 100);
  double worst_slack = 0.0;
  for (const auto& r : b.reports) worst_slack = std::min(worst_slack, r.rhs - r.lhs);
  o.require(worst_slack >= -1e-8, "1/inf J exceeds R_eff by " + std::to_string(-worst_slack));

  double worst_edge = 0.0;
  for (double c : {0.1, 1.0, 3.7}) {
    const OptimalConstant k = optimal_constant(edge_graph(c), 0.5, 0, 1, 1e-10);
    worst_edge = std::max(worst_edge, std::abs(k.ratio - 1.0));
  }
  o.require(worst_edge <= 1e-10, "two-vertex ratio off by " + std::to_string(worst_edge));

  double worst_oracle = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    CounterRng rng = CounterRng::stream(4242, i);
    const WeightedGraph g = fixtures::random_graph(rng, 2, 5);
    const auto [x, y] = fixtures::random_pair(rng, g);
    const double lib = optimal_constant(g, 0.5, x, y, 1e-9).inf_j;
    const double ref = oracle::optimal_constant(g, 0.5, x, y);
    worst_oracle = std::max(worst_oracle, std::abs(lib - ref) / ref);
  }
  o.require(worst_oracle <= 1e-8, "inf J disagrees with the oracle by " + std::to_string(worst_oracle));
  o.detail << ", worst slack " << worst_slack << ", oracle agreement " << worst_oracle;
}

void aldous_criterion(Outcome& o) {
  const BatchResult b = batch("aldous", 50);
  require_batch(o, b, 50);
  const VerificationReport k7 = check_aldous(complete_graph(7), 1e-8);
  o.require(k7.pass, "K_7 gaps disagree");
  const GapResult ip = gap_interchange(complete_graph(7));
  o.require(std::abs(ip.gap - 7.0) <= 1e-8 * 7.0, "K_7 interchange gap " + std::to_string(ip.gap));
  o.detail << ", K_7 interchange gap " << ip.gap << " (" << ip.method << ")";
}

void sg_criterion(Outcome& o) {
  const SgScalingTable corners = sg_scaling(7, 0, 0);
  double worst_ratio = 0.0, worst_closed = 0.0;
  for (const SgCornerRow& c : corners.corners) {
    const double closed = (2.0 / 3.0) * std::pow(5.0 / 3.0, c.level);
    worst_closed = std::max(worst_closed, std::abs(c.resistance - closed) / closed);
    worst_closed = std::max(worst_closed, std::abs(c.decimated - closed) / closed);
    if (c.level > 0) worst_ratio = std::max(worst_ratio, std::abs(c.ratio - 5.0 / 3.0));
  }
  o.require(corners.corners.size() == 8, "expected levels 0..7");
  o.require(worst_ratio <= 1e-9, "corner ratio off 5/3 by " + std::to_string(worst_ratio));
  o.require(worst_closed <= 1e-9, "corner resistance off the closed form by " + std::to_string(worst_closed));

  const SgScalingTable table = sg_scaling(6);
  const double c5 = table.level_constant.at(5), c6 = table.level_constant.at(6);
  char a[32], b[32];
  std::snprintf(a, sizeof a, "%.2e", c5);
  std::snprintf(b, sizeof b, "%.2e", c6);
  o.require(std::string(a) == b, std::string("sup table unstable: ") + a + " vs " + b);
  o.detail << "ratio error " << worst_ratio << ", closed-form error " << worst_closed << ", C_5 " << c5 << ", C_6 "
           << c6;
}

void stationarity_criterion(Outcome& o) {
  int passed = 0;
  double min_p = 1.0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    const ChiSquareResult r = stationarity_test(complete_graph(4), 0.5, 1e4, 200, s, 0.001);
    passed += r.pass ? 1 : 0;
    min_p = std::min(min_p, r.p_value);
  }
  o.require(passed >= 19, std::to_string(passed) + " of 20 seeds passed");
  o.detail << passed << "/20 seeds pass, smallest p " << min_p;
}

void phi_criterion(Outcome& o) {
  const TorusGraph torus = torus_graph(1, 6);
  const PhiPolynomial occ = tabulate_phi(torus.graph, occupation_bundle(), 2);
  const PhiPolynomial prod = tabulate_phi(torus.graph, neighbor_product_bundle(torus.graph), 2);
  for (double alpha : {0.0, 0.125, 0.3, 0.5, 0.9, 1.0}) {
    o.require(occ(alpha) == alpha, "Phi(alpha) != alpha at " + std::to_string(alpha));
    o.require(std::abs(prod(alpha) - alpha * alpha) <= 1e-15, "neighbor product != alpha^2");
  }
  o.detail << "Phi exact; superexponential estimate not asserted";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "sequential reduction matches pseudoinverse resistance", 10, resistance_criterion},
      {2, "energy identity at a vertex", 5, [](Outcome& o) { require_batch(o, batch("identity-2.2", 1000), 1000); }},
      {3, "Dirichlet principle with harmonic equality", 10,
       [](Outcome& o) { require_batch(o, batch("dirichlet", 1000), 2000); }},
      {4, "octopus inequality", 60, [](Outcome& o) { require_batch(o, batch("octopus", 1000), 1000); }},
      {5, "moving particle lemma, full space and sectors", 120, mpl_criterion},
      {6, "projection and sector decomposition", 60, projection_criterion},
      {7, "path sweep telescoping", 5, sweep_criterion},
      {8, "symmetric tori", 30, assumption_criterion},
      {9, "optimal constant against resistance", 120, optimal_criterion},
      {10, "spectral gaps coincide", 300, aldous_criterion},
      {11, "Sierpinski gasket resistance scaling", 60, sg_criterion},
      {12, "stationarity of the product measure", 60, stationarity_criterion},
      {13, "Phi of local functions", 5, phi_criterion},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(elapsed < c.limit_seconds, "over the time budget");
    failures += o.pass ? 0 : 1;
    std::printf("criterion %2d %s %s (%.2fs, limit %.0fs): %s\n", c.id, o.pass ? "PASS" : "FAIL",
                c.description.c_str(), elapsed, c.limit_seconds, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
