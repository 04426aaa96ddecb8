#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpllab/graph.hpp"
#include "mpllab/report.hpp"
#include "mpllab/rng.hpp"

namespace mpllab {

struct RandomGraphOptions {
  /// Probability of each non-tree edge.
  double extra_edge_probability = 0.4;
  /// Conductances are log-uniform in [min, max]; equal bounds give a constant.
  double min_conductance = 0.1;
  double max_conductance = 10.0;
};

/// Uniform random recursive spanning tree on a shuffled vertex order, plus
/// independent extra edges.
WeightedGraph random_connected_graph(CounterRng& rng, int n, const RandomGraphOptions& opts = {});

struct BatchOptions {
  std::uint64_t seed = 1;
  /// Instance count; each selector has its own default.
  std::optional<std::size_t> trials;
  /// Exact vertex count of random graphs; by default n is drawn per instance.
  std::optional<int> n;
  /// Upper bound for the per-instance n draw; each selector has its own default.
  std::optional<int> max_n;
  unsigned threads = 1;
  Tolerances tol;
  /// sweep: largest hop distance between x and y.
  int max_path_length = 4;
  /// sg-scaling: largest gasket level.
  int max_level = 6;
  /// Fixes alpha where a selector would otherwise draw it.
  std::optional<double> alpha;
  /// Fixes the graph where a selector would otherwise draw one.
  std::optional<WeightedGraph> graph;
};

struct BatchSummary {
  std::string name;
  std::size_t instances = 0;
  std::size_t passes = 0;
  std::size_t near_equalities = 0;
  double min_margin = 0.0;
  double pass_rate = 0.0;
};

struct BatchResult {
  std::string selector;
  /// In instance order, then in the order each instance emits them.
  std::vector<VerificationReport> reports;
  std::vector<BatchSummary> summaries;
  /// Selector-specific tables (the sg-scaling table, for one).
  nlohmann::json extra = nlohmann::json::object();

  bool all_pass() const noexcept;
};

/// Every selector accepted by run_batch, "all" last.
const std::vector<std::string>& verify_selectors();
bool is_verify_selector(const std::string& s);

/// Runs one named batch. Instance i draws from CounterRng::stream(seed, i), so
/// reports do not depend on the thread count.
BatchResult run_batch(const std::string& selector, const BatchOptions& opts);

/// Per report name, in order of first appearance.
std::vector<BatchSummary> summarize(const std::vector<VerificationReport>& reports, double near_equality);

/// name,instances,min_margin,pass_rate
void write_summary_csv(std::ostream& out, const std::vector<BatchSummary>& summaries);

/// Calls fn(i) for i in [0, count) on up to `threads` threads; rethrows the
/// first failure by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace mpllab
