#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "mpllab/rng.hpp"
#include "mpllab/states.hpp"

namespace mpllab {

/// Real vector indexed by the states of an enumerated space.
class StateFunction {
 public:
  /// Empty placeholder, attached to no space.
  StateFunction() = default;
  StateFunction(const SpaceDescriptor& space, std::vector<double> values);

  static StateFunction constant(const SpaceDescriptor& space, double value);
  static StateFunction zeros(const SpaceDescriptor& space) { return constant(space, 0.0); }
  /// i.i.d. standard normal value per state.
  static StateFunction random_normal(const SpaceDescriptor& space, CounterRng& rng);

  const SpaceDescriptor& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

 private:
  SpaceDescriptor space_;
  std::vector<double> values_;
};

/// Nonnegative weights over a space, with their logarithms (-inf for 0).
class Measure {
 public:
  Measure(const SpaceDescriptor& space, std::vector<double> log_weights);
  /// Weights given directly; logs are derived from them.
  static Measure from_weights(const SpaceDescriptor& space, std::vector<double> weights);

  const SpaceDescriptor& space() const noexcept { return space_; }
  std::size_t size() const noexcept { return weights_.size(); }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> log_weights() const noexcept { return log_weights_; }
  double weight(std::size_t i) const { return weights_[i]; }

  double total_mass() const noexcept;
  /// mu[h] = sum_i w_i h_i, compensated.
  double mean(std::span<const double> h) const;
  double mean(const StateFunction& h) const;

 private:
  friend Measure bernoulli_measure(int n, double alpha);
  friend Measure restrict_to_sector(const Measure& full, int k);

  SpaceDescriptor space_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
};

/// Product Bernoulli nu_alpha on {0,1}^V.
Measure bernoulli_measure(int n, double alpha);
/// Uniform probability on any enumerated space (nu_k on a sector, nu on S^IP).
Measure uniform_measure(const SpaceDescriptor& space);
/// Restriction of a full-space measure to sector k; total mass is the sector mass.
Measure restrict_to_sector(const Measure& full, int k);
/// C(n,k) alpha^k (1-alpha)^(n-k).
double sector_mass(int n, int k, double alpha);

/// f o pi_k on the permutation space of the same n.
StateFunction lift_function(const StateFunction& sector_function);

/// Little-endian: uint64 length, then that many IEEE-754 doubles.
void write_binary(std::ostream& out, const StateFunction& f);
StateFunction read_binary(std::istream& in, const SpaceDescriptor& space);

nlohmann::json to_json(const StateFunction& f);
StateFunction state_function_from_json(const SpaceDescriptor& space, const nlohmann::json& values);

}  // namespace mpllab
