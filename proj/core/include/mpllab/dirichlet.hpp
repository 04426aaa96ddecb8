#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Sparse>
#include <nlohmann/json.hpp>

#include "mpllab/graph.hpp"
#include "mpllab/resistance.hpp"
#include "mpllab/state_function.hpp"
#include "mpllab/states.hpp"

namespace mpllab {

enum class GeneratorKind { ExclusionFull, ExclusionSector, Interchange, Boundary };

const char* to_string(GeneratorKind kind) noexcept;

/// Reservoir at a boundary site: lambda_+ (birth, into the system) and
/// lambda_- (death, out of the system).
struct BoundaryRate {
  Vertex site = 0;
  double birth = 0.0;
  double death = 0.0;
};

/// Largest space for which matrix() materializes a sparse generator.
inline constexpr std::size_t kMaterializeLimit = 1'000'000;

/// L f = sum_{xy in E} c_xy grad_xy f, plus reservoir flips for the boundary kind.
class GeneratorOperator {
 public:
  static GeneratorOperator exclusion_full(const WeightedGraph& g);
  static GeneratorOperator exclusion_sector(const WeightedGraph& g, int k);
  static GeneratorOperator interchange(const WeightedGraph& g);
  /// Full-space generator L^EX + L^b; with include_bulk = false only L^b.
  static GeneratorOperator boundary(const WeightedGraph& g, std::vector<BoundaryRate> rates,
                                    bool include_bulk = true);

  GeneratorKind kind() const noexcept { return kind_; }
  const WeightedGraph& graph() const noexcept { return graph_; }
  const SpaceDescriptor& space() const noexcept { return space_; }
  const std::vector<BoundaryRate>& boundary_rates() const noexcept { return rates_; }

  StateFunction apply(const StateFunction& f) const;
  /// Sparse L with (Lf)_i = sum_j L_ij f_j. Throws ProblemTooLarge above kMaterializeLimit.
  Eigen::SparseMatrix<double> matrix() const;

  /// Image of state i under the swap along edge e.
  std::size_t swap_target(std::size_t edge, std::size_t state) const;

 private:
  GeneratorOperator(GeneratorKind kind, const WeightedGraph& g, SpaceDescriptor space);

  GeneratorKind kind_;
  WeightedGraph graph_;
  SpaceDescriptor space_;
  std::vector<BoundaryRate> rates_;
  bool bulk_ = true;
  std::optional<SwapTable> swaps_;
};

StateFunction apply_generator(const GeneratorOperator& op, const StateFunction& f);

/// (grad_xy f)(s) = f(s^{xy}) - f(s).
StateFunction gradient_xy(const StateFunction& f, Vertex x, Vertex y);

/// mu[(grad_xy f)^2].
double gradient_square_mean(const Measure& mu, const StateFunction& f, Vertex x, Vertex y);

/// (1/2) sum over the given edges of c_e mu[(grad_e f)^2]; the edges may come
/// from any reduced network on the same vertex ids.
double energy(std::span<const Edge> edges, const Measure& mu, const StateFunction& f);
double energy(const WeightedGraph& g, const Measure& mu, const StateFunction& f);
/// Same energy from the generator form mu[f (-L f)]. Not defined for the boundary kind.
double energy_generator_form(const GeneratorOperator& op, const Measure& mu, const StateFunction& f);

/// Restriction of a full-space function to the k-particle configurations.
StateFunction project_sector(const StateFunction& f, int k);
/// Inverse of the projections over k = 0..n.
StateFunction assemble_sectors(std::span<const StateFunction> sectors);

struct SectorEnergy {
  int k = 0;
  double mass = 0.0;
  double energy = 0.0;
  std::optional<double> lifted_energy;
};

/// E^EX_{nu_alpha}(f) against sum_k mass_k E^EX_k(f_k) and, when the permutation
/// space is enumerable, sum_k mass_k E^IP(f_k o pi_k).
struct EnergyDecomposition {
  double alpha = 0.0;
  double total = 0.0;
  double sector_sum = 0.0;
  std::optional<double> lifted_sum;
  std::vector<SectorEnergy> sectors;
};

/// Lifted interchange energies are computed when n <= this.
inline constexpr int kLiftLimit = 8;

EnergyDecomposition decompose_energy(const WeightedGraph& g, double alpha, const StateFunction& f);
nlohmann::json to_json(const EnergyDecomposition& d);

/// Energies along the reduction sequence eliminating V minus {x, y} in ascending
/// order: entry i uses the edges and conductances of the i-th reduced network
/// with f kept on its original space. The last entry is
/// (1/2) c_eff(x, y) mu[(grad_xy f)^2].
std::vector<double> reduced_energy_chain(const WeightedGraph& g, Vertex x, Vertex y, const Measure& mu,
                                         const StateFunction& f);
/// Random-walk version with el_energy (no 1/2); the last entry is c_eff [h(x) - h(y)]^2.
std::vector<double> reduced_energy_chain(const WeightedGraph& g, Vertex x, Vertex y, std::span<const double> h);

}  // namespace mpllab
