#include "mpllab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <boost/math/distributions/chi_squared.hpp>

#include "mpllab/error.hpp"
#include "mpllab/event_queue.hpp"
#include "mpllab/graph_io.hpp"
#include "mpllab/numeric.hpp"
#include "mpllab/rng.hpp"

namespace mpllab {

namespace {

void validate(const SimConfig& cfg) {
  const int n = cfg.graph.vertex_count();
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (!(cfg.acceleration > 0.0) || !std::isfinite(cfg.acceleration)) {
    throw Error(ErrorCode::InvalidArgument, "acceleration must be positive");
  }
  if (!(cfg.record_every >= 0.0)) throw Error(ErrorCode::InvalidArgument, "record_every must be nonnegative");
  if (cfg.initial) {
    if (cfg.initial->size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::InvalidArgument, "initial configuration has wrong length");
    }
    for (std::uint8_t b : *cfg.initial)
      if (b > 1) throw Error(ErrorCode::InvalidArgument, "occupancies must be 0 or 1");
  } else if (!(cfg.alpha >= 0.0 && cfg.alpha <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0,1]");
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const BoundaryRate& r : cfg.boundary) {
    cfg.graph.check_vertex(r.site);
    if (seen[r.site]++) throw Error(ErrorCode::InvalidArgument, "boundary site listed twice");
    if (!(r.birth >= 0.0 && r.death >= 0.0) || !std::isfinite(r.birth) || !std::isfinite(r.death)) {
      throw Error(ErrorCode::InvalidArgument, "boundary rates must be finite and nonnegative");
    }
  }
}

Mask to_mask(const Occupancy& occ) {
  Mask m = 0;
  for (std::size_t v = 0; v < occ.size(); ++v) m |= Mask{occ[v]} << v;
  return m;
}

void apply_event(const WeightedGraph& g, Occupancy& state, const SimEvent& e) {
  switch (e.type) {
    case EventType::Swap: {
      const Edge& edge = g.edge(e.index);
      std::swap(state[edge.u], state[edge.v]);
      break;
    }
    case EventType::Birth: state[e.index] = 1; break;
    case EventType::Death: state[e.index] = 0; break;
  }
}

}  // namespace

const char* to_string(EventType t) noexcept {
  switch (t) {
    case EventType::Swap: return "swap";
    case EventType::Birth: return "birth";
    case EventType::Death: return "death";
  }
  return "unknown";
}

Trajectory simulate(const SimConfig& cfg) {
  validate(cfg);
  const WeightedGraph& g = cfg.graph;
  const int n = g.vertex_count();
  const std::size_t edges = g.edge_count();

  Trajectory traj;
  traj.graph = g;
  traj.horizon = cfg.horizon;
  if (cfg.initial) {
    traj.initial = *cfg.initial;
  } else {
    CounterRng init = CounterRng::stream(cfg.seed, 0);
    traj.initial.resize(static_cast<std::size_t>(n));
    for (auto& b : traj.initial) b = init.bernoulli(cfg.alpha) ? 1 : 0;
  }
  Occupancy state = traj.initial;

  std::vector<CounterRng> rng;
  rng.reserve(edges + static_cast<std::size_t>(n));
  for (std::size_t c = 0; c < edges + static_cast<std::size_t>(n); ++c) rng.push_back(CounterRng::stream(cfg.seed, 1 + c));
  std::vector<double> birth(static_cast<std::size_t>(n), 0.0);
  std::vector<double> death(static_cast<std::size_t>(n), 0.0);
  std::vector<char> reservoir(static_cast<std::size_t>(n), 0);
  for (const BoundaryRate& r : cfg.boundary) {
    birth[r.site] = r.birth;
    death[r.site] = r.death;
    reservoir[r.site] = 1;
  }

  EventQueue queue(edges + static_cast<std::size_t>(n));
  auto refresh_edge = [&](std::size_t e, double now) {
    const Edge& edge = g.edge(e);
    if (state[edge.u] != state[edge.v]) {
      if (!queue.contains(e)) queue.schedule(e, now + rng[e].exponential(cfg.acceleration * edge.c));
    } else {
      queue.remove(e);
    }
  };
  // A site's flip rate depends on its own occupancy, so its clock restarts on every change.
  auto restart_site = [&](Vertex a, double now) {
    if (!reservoir[a]) return;
    const std::size_t channel = edges + static_cast<std::size_t>(a);
    queue.remove(channel);
    const double rate = state[a] ? death[a] : birth[a];
    if (rate > 0.0) queue.schedule(channel, now + rng[channel].exponential(rate));
  };
  auto touch_vertex = [&](Vertex v, double now) {
    for (const Neighbor& nb : g.neighbors(v)) refresh_edge(nb.edge, now);
    restart_site(v, now);
  };

  for (std::size_t e = 0; e < edges; ++e) refresh_edge(e, 0.0);
  for (Vertex a = 0; a < n; ++a) restart_site(a, 0.0);

  std::size_t next_snapshot = 0;
  auto snapshot_time = [&](std::size_t k) { return static_cast<double>(k) * cfg.record_every; };
  auto emit_snapshots_before = [&](double t, bool inclusive) {
    if (cfg.record_every <= 0.0) return;
    for (;;) {
      const double s = snapshot_time(next_snapshot);
      if (s > cfg.horizon || (inclusive ? s > t : s >= t)) break;
      traj.snapshots.push_back({s, state});
      ++next_snapshot;
    }
  };

  while (!queue.empty() && queue.top_time() <= cfg.horizon) {
    const double now = queue.top_time();
    const std::size_t channel = queue.top_channel();
    emit_snapshots_before(now, false);
    queue.remove(channel);
    SimEvent event{now, EventType::Swap, 0};
    if (channel < edges) {
      const Edge& edge = g.edge(channel);
      event.index = static_cast<std::uint32_t>(channel);
      std::swap(state[edge.u], state[edge.v]);
      touch_vertex(edge.u, now);
      touch_vertex(edge.v, now);
    } else {
      const auto a = static_cast<Vertex>(channel - edges);
      event.type = state[a] ? EventType::Death : EventType::Birth;
      event.index = static_cast<std::uint32_t>(a);
      state[a] ^= 1u;
      touch_vertex(a, now);
    }
    ++traj.event_count;
    if (cfg.record_events) traj.events.push_back(event);
  }
  emit_snapshots_before(cfg.horizon, true);
  traj.final = std::move(state);
  return traj;
}

TrajectoryCursor::TrajectoryCursor(const Trajectory& t) : traj_(&t), state_(t.initial) {
  if (t.event_count != t.events.size()) {
    throw Error(ErrorCode::InvalidArgument, "trajectory was simulated without recording events");
  }
}

double TrajectoryCursor::next_time() const noexcept {
  return at_end() ? traj_->horizon : traj_->events[next_].time;
}

const SimEvent& TrajectoryCursor::step() {
  const SimEvent& e = traj_->events.at(next_++);
  apply_event(traj_->graph, state_, e);
  time_ = e.time;
  return e;
}

void TrajectoryCursor::advance_to(double t) {
  while (!at_end() && traj_->events[next_].time <= t) step();
  time_ = std::max(time_, t);
}

std::vector<double> empirical_block_average(const Trajectory& traj, Vertex x, int radius,
                                            std::span<const double> times) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "radius must be at least 1");
  if (!std::is_sorted(times.begin(), times.end())) throw Error(ErrorCode::InvalidArgument, "times must be ascending");
  const auto b = ball(traj.graph, x, radius);
  TrajectoryCursor cursor(traj);
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) {
    cursor.advance_to(t);
    int count = 0;
    for (Vertex z : b) count += cursor.occupancy()[z];
    out.push_back(static_cast<double>(count) / static_cast<double>(b.size()));
  }
  return out;
}

std::vector<double> occupation_times(const Trajectory& traj) {
  const int n = traj.graph.vertex_count();
  if (n > kMaxFullSpaceSites) throw Error(ErrorCode::StateSpaceTooLarge, "occupation times need n <= 22");
  std::vector<double> out(std::size_t{1} << n, 0.0);
  TrajectoryCursor cursor(traj);
  double t = 0.0;
  while (!cursor.at_end()) {
    const double next = cursor.next_time();
    out[to_mask(cursor.occupancy())] += next - t;
    t = next;
    cursor.step();
  }
  out[to_mask(cursor.occupancy())] += traj.horizon - t;
  return out;
}

std::vector<std::uint64_t> transition_counts(const Trajectory& traj) {
  const int n = traj.graph.vertex_count();
  if (n > 8) throw Error(ErrorCode::StateSpaceTooLarge, "transition counts need n <= 8");
  const std::size_t states = std::size_t{1} << n;
  std::vector<std::uint64_t> out(states * states, 0);
  TrajectoryCursor cursor(traj);
  while (!cursor.at_end()) {
    const Mask from = to_mask(cursor.occupancy());
    cursor.step();
    ++out[from * states + to_mask(cursor.occupancy())];
  }
  return out;
}

LocalFunctionBundle occupation_bundle() {
  return {1, [](Vertex x, std::span<const Vertex> patch, std::span<const std::uint8_t> occ) {
            const auto it = std::lower_bound(patch.begin(), patch.end(), x);
            return static_cast<double>(occ[static_cast<std::size_t>(it - patch.begin())]);
          }};
}

LocalFunctionBundle neighbor_product_bundle(const WeightedGraph& g) {
  std::vector<Vertex> partner(static_cast<std::size_t>(g.vertex_count()), -1);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (g.degree(v) > 0) partner[v] = g.neighbors(v).front().vertex;
  }
  return {2, [partner](Vertex x, std::span<const Vertex> patch, std::span<const std::uint8_t> occ) {
            const Vertex y = partner.at(static_cast<std::size_t>(x));
            if (y < 0) throw Error(ErrorCode::InvalidArgument, "vertex has no neighbor");
            auto at = [&](Vertex v) {
              const auto it = std::lower_bound(patch.begin(), patch.end(), v);
              return static_cast<double>(occ[static_cast<std::size_t>(it - patch.begin())]);
            };
            return at(x) * at(y);
          }};
}

double PhiPolynomial::operator()(double alpha) const noexcept {
  double acc = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * alpha + *it;
  return acc;
}

PhiPolynomial tabulate_phi(const WeightedGraph& g, const LocalFunctionBundle& phi, Vertex x) {
  const auto patch = ball(g, x, phi.radius);
  const int m = static_cast<int>(patch.size());
  if (m > 24) throw Error(ErrorCode::StateSpaceTooLarge, "patch too large to enumerate");
  // by_count[k] = sum of phi over patch configurations with k particles
  std::vector<CompensatedSum> by_count(static_cast<std::size_t>(m) + 1);
  std::vector<std::uint8_t> occ(static_cast<std::size_t>(m));
  for (Mask c = 0; c < (Mask{1} << m); ++c) {
    for (int i = 0; i < m; ++i) occ[i] = (c >> i) & 1u;
    by_count[std::popcount(c)].add(phi.evaluate(x, patch, occ));
  }
  // alpha^k (1 - alpha)^(m - k) = sum_i C(m - k, i) (-1)^i alpha^(k + i)
  std::vector<CompensatedSum> coeff(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    const double s = by_count[k].value();
    if (s == 0.0) continue;
    for (int i = 0; i <= m - k; ++i) {
      const double b = static_cast<double>(binomial(m - k, i));
      coeff[k + i].add((i % 2 ? -b : b) * s);
    }
  }
  PhiPolynomial out;
  for (const CompensatedSum& c : coeff) out.coefficients.push_back(c.value());
  while (out.coefficients.size() > 1 && out.coefficients.back() == 0.0) out.coefficients.pop_back();
  return out;
}

int block_radius(int level, double epsilon) {
  if (level < 0 || !(epsilon >= 0.0)) throw Error(ErrorCode::InvalidArgument, "need level >= 0 and epsilon >= 0");
  const int e = static_cast<int>(std::floor(epsilon * level));
  if (e > 30) throw Error(ErrorCode::InvalidArgument, "block radius overflows");
  return 1 << e;
}

double time_average_U(const Trajectory& traj, const LocalFunctionBundle& phi, Vertex x, int block_radius_value,
                      const PhiPolynomial& phi_table) {
  if (block_radius_value < 1) throw Error(ErrorCode::InvalidArgument, "block radius must be at least 1");
  const auto patch = ball(traj.graph, x, phi.radius);
  const auto b = ball(traj.graph, x, block_radius_value);
  std::vector<std::uint8_t> occ(patch.size());
  auto u_value = [&](const Occupancy& state) {
    for (std::size_t i = 0; i < patch.size(); ++i) occ[i] = state[patch[i]];
    int count = 0;
    for (Vertex z : b) count += state[z];
    return phi.evaluate(x, patch, occ) - phi_table(static_cast<double>(count) / static_cast<double>(b.size()));
  };
  TrajectoryCursor cursor(traj);
  CompensatedSum integral;
  double t = 0.0;
  while (!cursor.at_end()) {
    const double next = cursor.next_time();
    integral.add(u_value(cursor.occupancy()) * (next - t));
    t = next;
    cursor.step();
  }
  integral.add(u_value(cursor.occupancy()) * (traj.horizon - t));
  return integral.value() / traj.horizon;
}

void write_events_csv(std::ostream& out, const Trajectory& traj) {
  out << "time,type,index\n";
  for (const SimEvent& e : traj.events) out << format_double(e.time) << ',' << to_string(e.type) << ',' << e.index << '\n';
}

nlohmann::json trajectory_summary(const Trajectory& traj) {
  std::uint64_t swaps = 0, births = 0, deaths = 0;
  for (const SimEvent& e : traj.events) {
    switch (e.type) {
      case EventType::Swap: ++swaps; break;
      case EventType::Birth: ++births; break;
      case EventType::Death: ++deaths; break;
    }
  }
  auto density = [](const Occupancy& o) {
    double s = 0.0;
    for (auto b : o) s += b;
    return o.empty() ? 0.0 : s / static_cast<double>(o.size());
  };
  nlohmann::json j{{"n", traj.graph.vertex_count()},
                   {"horizon", traj.horizon},
                   {"events", traj.event_count},
                   {"initial_density", density(traj.initial)},
                   {"final_density", density(traj.final)},
                   {"snapshots", traj.snapshots.size()}};
  if (traj.events.size() == traj.event_count) {
    j["swaps"] = swaps;
    j["births"] = births;
    j["deaths"] = deaths;
  }
  return j;
}

ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                                double significance) {
  if (observed.size() != probabilities.size()) throw Error(ErrorCode::InvalidArgument, "cell count mismatch");
  ChiSquareResult r;
  for (std::uint64_t o : observed) r.samples += o;
  int cells = 0;
  CompensatedSum stat;
  bool impossible = false;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (probabilities[i] <= 0.0) {
      impossible |= observed[i] > 0;
      continue;
    }
    ++cells;
    const double expected = probabilities[i] * static_cast<double>(r.samples);
    const double d = static_cast<double>(observed[i]) - expected;
    stat.add(d * d / expected);
  }
  r.statistic = stat.value();
  r.dof = cells - 1;
  if (impossible) {
    r.p_value = 0.0;
  } else if (r.dof < 1) {
    r.p_value = 1.0;
  } else {
    const boost::math::chi_squared dist(r.dof);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  }
  r.pass = r.p_value >= significance;
  return r;
}

ChiSquareResult stationarity_test(const WeightedGraph& g, double alpha, double horizon, std::size_t replicas,
                                  std::uint64_t seed, double significance) {
  const int n = g.vertex_count();
  if (n > 16) throw Error(ErrorCode::StateSpaceTooLarge, "stationarity test needs n <= 16");
  std::vector<std::uint64_t> counts(std::size_t{1} << n, 0);
  SimConfig cfg;
  cfg.graph = g;
  cfg.alpha = alpha;
  cfg.horizon = horizon;
  cfg.record_events = false;
  for (std::size_t r = 0; r < replicas; ++r) {
    cfg.seed = CounterRng::stream(seed, r)();
    ++counts[to_mask(simulate(cfg).final)];
  }
  const Measure nu = bernoulli_measure(n, alpha);
  return chi_square_test(counts, nu.weights(), significance);
}

}  // namespace mpllab
