#include "mpllab/batch.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "mpllab/dirichlet.hpp"
#include "mpllab/error.hpp"
#include "mpllab/graph_io.hpp"
#include "mpllab/inequality.hpp"
#include "mpllab/reduction.hpp"
#include "mpllab/resistance.hpp"
#include "mpllab/sg_scaling.hpp"
#include "mpllab/spectral.hpp"
#include "mpllab/torus.hpp"

namespace mpllab {

WeightedGraph random_connected_graph(CounterRng& rng, int n, const RandomGraphOptions& opts) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one vertex");
  if (!(opts.min_conductance > 0.0 && opts.max_conductance >= opts.min_conductance)) {
    throw Error(ErrorCode::InvalidArgument, "conductance range must be positive and ordered");
  }
  const double lo = std::log(opts.min_conductance);
  const double hi = std::log(opts.max_conductance);
  auto conductance = [&] { return lo == hi ? opts.min_conductance : std::exp(rng.uniform(lo, hi)); };

  std::vector<Vertex> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(static_cast<std::uint64_t>(i) + 1)]);

  std::vector<char> present(static_cast<std::size_t>(n) * n, 0);
  std::vector<Edge> edges;
  auto add = [&](Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    present[static_cast<std::size_t>(u) * n + v] = 1;
    edges.push_back({u, v, conductance()});
  };
  for (int i = 1; i < n; ++i) add(order[i], order[rng.below(static_cast<std::uint64_t>(i))]);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!present[static_cast<std::size_t>(u) * n + v] && rng.bernoulli(opts.extra_edge_probability)) add(u, v);
  return WeightedGraph(n, std::move(edges));
}

bool BatchResult::all_pass() const noexcept {
  return std::all_of(reports.begin(), reports.end(), [](const VerificationReport& r) { return r.pass; });
}

const std::vector<std::string>& verify_selectors() {
  static const std::vector<std::string> names{
      "resistance", "mpl",       "ip-mpl",       "octopus", "dirichlet", "identity-2.2", "projection-4.7",
      "decomposition-4.9", "sweep", "assumption-a", "optimal", "aldous",    "sg-scaling",   "all"};
  return names;
}

bool is_verify_selector(const std::string& s) {
  const auto& names = verify_selectors();
  return std::find(names.begin(), names.end(), s) != names.end();
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

struct Instance {
  CounterRng rng;
  std::size_t id;
  const BatchOptions& opts;

  int draw_n(int lo, int hi) {
    if (opts.graph) return opts.graph->vertex_count();
    if (opts.n) return *opts.n;
    hi = opts.max_n ? *opts.max_n : hi;
    if (hi < lo) throw Error(ErrorCode::InvalidArgument, "max n below the selector minimum of " + std::to_string(lo));
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  WeightedGraph graph(int lo, int hi, const RandomGraphOptions& g = {}) {
    if (opts.graph) return *opts.graph;
    return random_connected_graph(rng, draw_n(lo, hi), g);
  }

  Vertex vertex(const WeightedGraph& g) { return static_cast<Vertex>(rng.below(g.vertex_count())); }

  std::pair<Vertex, Vertex> pair(const WeightedGraph& g) {
    if (g.vertex_count() < 2) throw Error(ErrorCode::TooFewVertices, "need two vertices");
    const Vertex x = vertex(g);
    Vertex y = static_cast<Vertex>(rng.below(g.vertex_count() - 1));
    if (y >= x) ++y;
    return {x, y};
  }

  std::vector<double> vertex_function(const WeightedGraph& g) {
    std::vector<double> h(static_cast<std::size_t>(g.vertex_count()));
    for (double& v : h) v = rng.normal();
    return h;
  }
};

using Reports = std::vector<VerificationReport>;
using InstanceFn = std::function<Reports(Instance&)>;

void tag(Reports& reports, std::size_t id) {
  for (auto& r : reports) r.instance["id"] = id;
}

Reports run_instances(std::size_t count, const BatchOptions& opts, const InstanceFn& fn) {
  std::vector<Reports> per(count);
  parallel_for(count, opts.threads, [&](std::size_t i) {
    Instance inst{CounterRng::stream(opts.seed, i), i, opts};
    per[i] = fn(inst);
    tag(per[i], i);
  });
  Reports out;
  for (auto& r : per) out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
  return out;
}

Reports resistance_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 12);
  // Worst pair of the instance by relative deviation.
  VerificationReport worst;
  bool first = true;
  const int n = g.vertex_count();
  const Eigen::MatrixXd oracle = resistance_matrix(g);
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = x + 1; y < n; ++y) {
      const double reduced = effective_resistance(g, x, y).resistance;
      const double direct = effective_resistance_oracle(g, x, y);
      auto r = identity_report("resistance-oracle", reduced, direct, in.opts.tol.inequality);
      r.tolerance = in.opts.tol.inequality * std::abs(direct);
      r.pass = r.margin >= -r.tolerance;
      r.instance = {{"n", n}, {"edges", g.edge_count()}, {"x", x}, {"y", y}};
      r.witness = {{"green", oracle(x, y)}};
      if (first || r.margin / r.tolerance < worst.margin / worst.tolerance) worst = r;
      first = false;
    }
  }
  return {worst};
}

Reports identity_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 12);
  const Vertex x = in.vertex(g);
  return {check_energy_identity(g, x, in.vertex_function(g), in.opts.tol.identity)};
}

Reports dirichlet_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 12);
  const auto [x, y] = in.pair(g);
  Reports out{check_dirichlet_principle(g, x, y, in.vertex_function(g), in.opts.tol.inequality)};
  const auto h = harmonic_extension(g, x, y);
  const double resistance = effective_resistance_oracle(g, x, y);
  auto eq = identity_report("dirichlet-equality", resistance * el_energy(g, h), 1.0, in.opts.tol.inequality);
  eq.instance = {{"n", g.vertex_count()}, {"x", x}, {"y", y}};
  eq.witness = {{"resistance", resistance}};
  out.push_back(std::move(eq));
  return out;
}

Reports octopus_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 6);
  const Vertex x = in.vertex(g);
  const auto f = StateFunction::random_normal(SpaceDescriptor::permutation(g.vertex_count()), in.rng);
  return {check_octopus(g, x, f, in.opts.tol.inequality)};
}

Reports mpl_instance(Instance& in) {
  static constexpr double kAlphas[] = {0.1, 0.5, 0.9};
  Reports out;
  {
    const WeightedGraph g = in.graph(2, 6);
    const auto [x, y] = in.pair(g);
    const double alpha = in.opts.alpha ? *in.opts.alpha : kAlphas[in.rng.below(3)];
    const auto f = StateFunction::random_normal(SpaceDescriptor::full(g.vertex_count()), in.rng);
    out.push_back(check_mpl(g, alpha, x, y, f, in.opts.tol.inequality));
  }
  const WeightedGraph g = in.graph(2, 8);
  const auto [x, y] = in.pair(g);
  for (int k = 1; k < g.vertex_count(); ++k) {
    const auto f = StateFunction::random_normal(SpaceDescriptor::sector(g.vertex_count(), k), in.rng);
    out.push_back(check_mpl_sector(g, x, y, f, in.opts.tol.inequality));
  }
  return out;
}

Reports ip_mpl_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 6);
  const auto [x, y] = in.pair(g);
  const auto f = StateFunction::random_normal(SpaceDescriptor::permutation(g.vertex_count()), in.rng);
  return {check_ip_mpl(g, x, y, f, in.opts.tol.inequality)};
}

Reports projection_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 6);
  const int n = g.vertex_count();
  const Measure nu = uniform_measure(SpaceDescriptor::permutation(n));
  Reports out;
  for (int k = 0; k <= n; ++k) {
    const auto f = StateFunction::random_normal(SpaceDescriptor::sector(n, k), in.rng);
    const double lifted = energy(g, nu, lift_function(f));
    const double sector = energy(g, uniform_measure(f.space()), f);
    auto r = identity_report("projection", lifted, sector, in.opts.tol.identity);
    r.instance = {{"n", n}, {"k", k}, {"edges", g.edge_count()}};
    out.push_back(std::move(r));
  }
  return out;
}

Reports decomposition_instance(Instance& in) {
  static constexpr double kAlphas[] = {0.25, 0.5, 0.75};
  const WeightedGraph g = in.graph(2, 6);
  const double alpha = in.opts.alpha ? *in.opts.alpha : kAlphas[in.rng.below(3)];
  const auto f = StateFunction::random_normal(SpaceDescriptor::full(g.vertex_count()), in.rng);
  const EnergyDecomposition d = decompose_energy(g, alpha, f);
  double deviation = std::abs(d.total - d.sector_sum);
  if (d.lifted_sum) deviation = std::max(deviation, std::abs(d.total - *d.lifted_sum));
  auto r = identity_report("decomposition", d.total, d.sector_sum, in.opts.tol.identity);
  r.margin = -deviation;
  r.pass = r.margin >= -r.tolerance;
  r.instance = {{"n", g.vertex_count()}, {"edges", g.edge_count()}, {"alpha", alpha}};
  r.witness = to_json(d);
  return {r};
}

Reports sweep_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 8);
  const Vertex x = in.vertex(g);
  const auto dist = hop_distances(g, x);
  std::vector<Vertex> targets;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (dist[v] >= 1 && dist[v] <= in.opts.max_path_length) targets.push_back(v);
  if (targets.empty()) throw Error(ErrorCode::NoPath, "no vertex within the path length bound");
  const Vertex y = targets[in.rng.below(targets.size())];
  const auto f = StateFunction::random_normal(SpaceDescriptor::full(g.vertex_count()), in.rng);
  const Mask zeta = in.rng.below(f.size());
  const SweepPlan plan = path_sweep(g, x, y);
  TelescopingResult t = verify_telescoping(plan, f, zeta, in.opts.tol.inequality);
  return {t.identity, t.cauchy_schwarz};
}

Reports assumption_instance(Instance& in) {
  static const std::pair<int, int> kTori[] = {{1, 4}, {1, 6}, {2, 3}};
  const auto [d, side] = kTori[in.id % 3];
  const TorusGraph torus = torus_graph(d, side);
  const auto raw = StateFunction::random_normal(SpaceDescriptor::full(torus.graph.vertex_count()), in.rng);
  const StateFunction f = symmetrize(torus, raw);
  auto uniform = check_uniform_edge_energy(torus.graph, f, in.opts.tol.symmetry);
  uniform.instance["dimension"] = d;
  uniform.instance["side"] = side;
  const auto [x, y] = in.pair(torus.graph);
  ConventionalBound b = conventional_mpl_bound(torus.graph, x, y, f, in.opts.tol.inequality);
  auto cmin = identity_report("assumption-a-cmin", b.c_min, 1.0, in.opts.tol.symmetry);
  cmin.instance = uniform.instance;
  b.report.instance["dimension"] = d;
  b.report.instance["side"] = side;
  return {uniform, cmin, b.report};
}

Reports optimal_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 5);
  const auto [x, y] = in.pair(g);
  return {optimal_constant(g, in.opts.alpha.value_or(0.5), x, y, in.opts.tol.inequality).report};
}

Reports aldous_instance(Instance& in) {
  const WeightedGraph g = in.graph(2, 6);
  return {check_aldous(g, in.opts.tol.spectral)};
}

std::size_t default_trials(const std::string& s) {
  static const std::map<std::string, std::size_t> trials{
      {"resistance", 200},       {"identity-2.2", 1000}, {"dirichlet", 1000},  {"octopus", 1000},
      {"mpl", 500},              {"ip-mpl", 500},        {"projection-4.7", 200}, {"decomposition-4.9", 200},
      {"sweep", 1000},           {"assumption-a", 30},   {"optimal", 100},     {"aldous", 50}};
  return trials.at(s);
}

BatchResult sg_batch(const BatchOptions& opts) {
  BatchResult out;
  const SgScalingTable table = sg_scaling(opts.max_level);
  for (const SgCornerRow& c : table.corners) {
    auto dec = identity_report("sg-decimation", c.decimated, c.resistance, opts.tol.identity);
    dec.instance = {{"N", c.level}};
    out.reports.push_back(std::move(dec));
    if (c.level == 0) continue;
    auto r = identity_report("sg-corner-ratio", c.ratio, kSgRenormalization, opts.tol.inequality);
    r.instance = {{"N", c.level}};
    r.witness = {{"resistance", c.resistance}};
    out.reports.push_back(std::move(r));
  }
  if (table.level_constant.size() >= 2) {
    const double prev = table.level_constant[table.level_constant.size() - 2];
    const double last = table.level_constant.back();
    auto r = identity_report("sg-constant-stability", last, prev, kSgStabilityTolerance);
    r.instance = {{"N", opts.max_level}};
    r.witness = {{"constant", table.constant}, {"level_constant", table.level_constant}};
    out.reports.push_back(std::move(r));
  }
  out.extra = to_json(table);
  return out;
}

BatchResult run_single(const std::string& selector, const BatchOptions& opts) {
  if (selector == "sg-scaling") return sg_batch(opts);
  static const std::map<std::string, Reports (*)(Instance&)> fns{
      {"resistance", resistance_instance},
      {"identity-2.2", identity_instance},
      {"dirichlet", dirichlet_instance},
      {"octopus", octopus_instance},
      {"mpl", mpl_instance},
      {"ip-mpl", ip_mpl_instance},
      {"projection-4.7", projection_instance},
      {"decomposition-4.9", decomposition_instance},
      {"sweep", sweep_instance},
      {"assumption-a", assumption_instance},
      {"optimal", optimal_instance},
      {"aldous", aldous_instance}};
  BatchResult out;
  out.reports = run_instances(opts.trials.value_or(default_trials(selector)), opts, fns.at(selector));
  return out;
}

}  // namespace

BatchResult run_batch(const std::string& selector, const BatchOptions& opts) {
  if (!is_verify_selector(selector)) throw Error(ErrorCode::InvalidArgument, "unknown selector '" + selector + "'");
  BatchResult out;
  out.selector = selector;
  if (selector == "all") {
    for (const std::string& s : verify_selectors()) {
      if (s == "all") continue;
      BatchResult part = run_single(s, opts);
      out.reports.insert(out.reports.end(), part.reports.begin(), part.reports.end());
      if (!part.extra.empty()) out.extra[s] = part.extra;
    }
  } else {
    BatchResult part = run_single(selector, opts);
    out.reports = std::move(part.reports);
    out.extra = std::move(part.extra);
  }
  out.summaries = summarize(out.reports, opts.tol.near_equality);
  return out;
}

std::vector<BatchSummary> summarize(const std::vector<VerificationReport>& reports, double near_equality_tol) {
  std::vector<BatchSummary> out;
  std::map<std::string, std::size_t> index;
  for (const VerificationReport& r : reports) {
    auto [it, fresh] = index.try_emplace(r.name, out.size());
    if (fresh) {
      out.push_back({r.name, 0, 0, 0, r.margin, 0.0});
    }
    BatchSummary& s = out[it->second];
    ++s.instances;
    if (r.pass) ++s.passes;
    if (near_equality(r, near_equality_tol)) ++s.near_equalities;
    s.min_margin = std::min(s.min_margin, r.margin);
  }
  for (BatchSummary& s : out) s.pass_rate = static_cast<double>(s.passes) / static_cast<double>(s.instances);
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<BatchSummary>& summaries) {
  out << "name,instances,min_margin,pass_rate\n";
  for (const BatchSummary& s : summaries) {
    out << s.name << ',' << s.instances << ',' << format_double(s.min_margin) << ',' << format_double(s.pass_rate)
        << '\n';
  }
}

}  // namespace mpllab
