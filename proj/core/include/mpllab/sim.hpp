#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpllab/dirichlet.hpp"
#include "mpllab/graph.hpp"

namespace mpllab {

using Occupancy = std::vector<std::uint8_t>;

struct SimConfig {
  WeightedGraph graph = WeightedGraph(1, {});
  /// Initial law nu_alpha, unless an explicit configuration is given.
  double alpha = 0.5;
  std::optional<Occupancy> initial;
  double horizon = 1.0;
  /// Multiplies the edge rates; boundary rates are left as given.
  double acceleration = 1.0;
  std::vector<BoundaryRate> boundary;
  std::uint64_t seed = 0;
  /// Snapshot spacing; 0 records none.
  double record_every = 0.0;
  /// Keep the event list (needed by the path statistics below).
  bool record_events = true;
};

enum class EventType : std::uint8_t { Swap, Birth, Death };

const char* to_string(EventType t) noexcept;

struct SimEvent {
  double time;
  EventType type;
  /// Edge index for swaps, site for births and deaths.
  std::uint32_t index;
};

struct Snapshot {
  double time;
  Occupancy occupancy;
};

struct Trajectory {
  WeightedGraph graph = WeightedGraph(1, {});
  double horizon = 0.0;
  Occupancy initial;
  Occupancy final;
  std::vector<SimEvent> events;
  std::vector<Snapshot> snapshots;
  std::uint64_t event_count = 0;
};

/// Exact continuous-time simulation by the next-reaction method. Only
/// productive channels carry clocks: edges with differing endpoint occupancy
/// and boundary sites with a positive flip rate. Events are drawn from a
/// counter-based stream per channel: edge e uses stream(seed, 1 + e), boundary
/// site a uses stream(seed, 1 + |E| + a) and the initial law stream(seed, 0).
Trajectory simulate(const SimConfig& cfg);

/// Replays events in time order, with exact piecewise-constant state.
class TrajectoryCursor {
 public:
  explicit TrajectoryCursor(const Trajectory& t);

  const Occupancy& occupancy() const noexcept { return state_; }
  double time() const noexcept { return time_; }
  /// Time of the next event, or the horizon.
  double next_time() const noexcept;
  bool at_end() const noexcept { return next_ >= traj_->events.size(); }
  /// Applies the next event; returns it.
  const SimEvent& step();
  /// Applies every event with time <= t.
  void advance_to(double t);

 private:
  const Trajectory* traj_;
  Occupancy state_;
  std::size_t next_ = 0;
  double time_ = 0.0;
};

/// <eta_t>_B at each requested (ascending) time, B = ball(g, x, radius) = {z : d(x, z) < radius}.
std::vector<double> empirical_block_average(const Trajectory& traj, Vertex x, int radius,
                                            std::span<const double> times);

/// Total time spent in each configuration mask (n <= 22).
std::vector<double> occupation_times(const Trajectory& traj);

/// counts[from * 2^n + to] of observed transitions (n <= 8).
std::vector<std::uint64_t> transition_counts(const Trajectory& traj);

/// phi_x depends on eta restricted to B_d(x, radius); the evaluator receives the
/// ball's vertices (ascending) and their occupancies in the same order.
struct LocalFunctionBundle {
  int radius = 1;
  std::function<double(Vertex x, std::span<const Vertex> patch, std::span<const std::uint8_t> occupancy)> evaluate;
};

/// phi_x(eta) = eta(x).
LocalFunctionBundle occupation_bundle();
/// phi_x(eta) = eta(x) eta(y) with y the smallest neighbor of x in g.
LocalFunctionBundle neighbor_product_bundle(const WeightedGraph& g);

/// alpha -> nu_alpha[phi_x] as exact power-basis coefficients.
struct PhiPolynomial {
  std::vector<double> coefficients;
  double operator()(double alpha) const noexcept;
};

/// Enumerates all 2^|patch| patch configurations (patch size <= 24).
PhiPolynomial tabulate_phi(const WeightedGraph& g, const LocalFunctionBundle& phi, Vertex x);

/// 2^floor(eps N).
int block_radius(int level, double epsilon);

/// (1/T) int_0^T [phi_x(eta_t) - Phi_x(<eta_t>_{B_d(x, block_radius)})] dt, exact between events.
double time_average_U(const Trajectory& traj, const LocalFunctionBundle& phi, Vertex x, int block_radius,
                      const PhiPolynomial& phi_table);

/// CSV with header time,type,index.
void write_events_csv(std::ostream& out, const Trajectory& traj);
nlohmann::json trajectory_summary(const Trajectory& traj);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
  std::size_t samples = 0;
  bool pass = false;
};

/// Pearson test of observed counts against expected probabilities at the given
/// significance level; cells with zero probability must be empty.
ChiSquareResult chi_square_test(std::span<const std::uint64_t> observed, std::span<const double> probabilities,
                                double significance);

/// Stationarity of nu_alpha with no boundary drive: `replicas` independent runs
/// from nu_alpha to the horizon, endpoint configurations tested against nu_alpha.
ChiSquareResult stationarity_test(const WeightedGraph& g, double alpha, double horizon, std::size_t replicas,
                                  std::uint64_t seed, double significance);

}  // namespace mpllab
