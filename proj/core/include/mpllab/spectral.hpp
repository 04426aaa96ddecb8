#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "mpllab/graph.hpp"
#include "mpllab/report.hpp"

namespace mpllab {

/// Spaces up to this size use a dense symmetric eigensolver; larger ones
/// (up to 8! states) use Lanczos with the kernel deflated.
inline constexpr std::size_t kDenseSpectralLimit = 5040;
inline constexpr std::size_t kSpectralStateLimit = 40320;

struct GapResult {
  std::string kind;
  std::size_t size = 0;
  /// Smallest nonzero eigenvalue of -L.
  double gap = 0.0;
  int zero_multiplicity = 0;
  /// ||M v - gap v|| / ||v|| for the returned eigenvector, M = -L.
  double residual = 0.0;
  std::string method;
};

GapResult gap_random_walk(const WeightedGraph& g);
GapResult gap_interchange(const WeightedGraph& g);
/// Sector k, 1 <= k <= n - 1.
GapResult gap_exclusion(const WeightedGraph& g, int k);

/// |gap_IP - gap_RW| and max_k |gap_EX_k - gap_RW| against relative_tol * gap_RW.
VerificationReport check_aldous(const WeightedGraph& g, double relative_tol);

nlohmann::json to_json(const GapResult& r);

}  // namespace mpllab
