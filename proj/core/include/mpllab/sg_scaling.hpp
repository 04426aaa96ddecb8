#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "mpllab/sg_graph.hpp"

namespace mpllab {

inline constexpr int kSgScalingMaxLevel = 8;
inline constexpr double kSgRenormalization = 5.0 / 3.0;
/// Relative agreement required between the constants of the two finest levels.
inline constexpr double kSgStabilityTolerance = 5e-4;

/// sup over pairs sharing a level-j cell of R_eff(x, y) / (5/3)^(N - j).
struct SgScalingRow {
  int level = 0;
  int j = 0;
  double sup_ratio = 0.0;
  Vertex x = 0;
  Vertex y = 0;
  double resistance = 0.0;
  std::size_t pairs = 0;
};

/// Corner resistance R_N(a_0, a_1) from the Green function and from
/// decimating the gasket down to its three corners.
struct SgCornerRow {
  int level = 0;
  double resistance = 0.0;
  double decimated = 0.0;
  /// R_N / R_{N-1}; 0 for N = 0.
  double ratio = 0.0;
};

struct SgScalingTable {
  std::vector<SgScalingRow> rows;
  std::vector<SgCornerRow> corners;
  /// Per level N, the sup over the requested j.
  std::vector<double> level_constant;
  /// Sup over all rows.
  double constant = 0.0;
};

/// Levels 0..max_level, cell levels j in [j_min, min(j_max, N)] (j_max < 0 means N).
SgScalingTable sg_scaling(int max_level, int j_min = 0, int j_max = -1);

/// R_N(a_0, a_1) by eliminating every non-corner vertex, finest level first.
double sg_corner_resistance_decimated(const SgGraph& g);

nlohmann::json to_json(const SgScalingTable& t);

}  // namespace mpllab
