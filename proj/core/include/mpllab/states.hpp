#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mpllab/graph.hpp"

namespace mpllab {

using Mask = std::uint64_t;

/// Occupancy zeta in {0,1}^V for |V| <= 64, bit v set iff v is occupied.
class ExclusionConfig {
 public:
  explicit ExclusionConfig(int n, Mask bits = 0);
  static ExclusionConfig from_occupancy(std::span<const int> occupancy);

  int size() const noexcept { return n_; }
  Mask bits() const noexcept { return bits_; }
  bool occupied(Vertex v) const;
  int particle_count() const noexcept;
  std::vector<int> occupancy() const;

  friend bool operator==(const ExclusionConfig&, const ExclusionConfig&) = default;

 private:
  int n_;
  Mask bits_;
};

/// zeta^{xy}: occupancies at x and y exchanged.
ExclusionConfig swap_config(const ExclusionConfig& zeta, Vertex x, Vertex y);
/// zeta^a: occupancy at a flipped.
ExclusionConfig flip_config(const ExclusionConfig& zeta, Vertex a);

constexpr Mask swap_bits(Mask m, Vertex x, Vertex y) noexcept {
  const Mask differ = ((m >> x) ^ (m >> y)) & 1u;
  return m ^ ((differ << x) | (differ << y));
}

/// Interchange state: one labelled particle per vertex. Vertices and particles
/// are 0-based here; particle p, vertex v correspond to p + 1, v + 1 in the
/// 1-based labelling of the model.
class Permutation {
 public:
  /// particle_at[v] is the particle sitting at vertex v.
  explicit Permutation(std::vector<int> particle_at);
  static Permutation identity(int n);

  int size() const noexcept { return static_cast<int>(particle_at_.size()); }
  int particle_at(Vertex v) const { return particle_at_.at(static_cast<std::size_t>(v)); }
  Vertex position_of(int particle) const;
  const std::vector<int>& particles() const noexcept { return particle_at_; }

  void swap_vertices(Vertex x, Vertex y);

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> particle_at_;
};

/// eta^{xy} = eta composed with the transposition of x and y: the particles at
/// vertices x and y trade places.
Permutation transpose_perm(const Permutation& eta, Vertex x, Vertex y);

/// pi_k(eta): the set of vertices holding particles 0..k-1.
ExclusionConfig project_pi_k(const Permutation& eta, int k);

enum class SpaceKind { Full, Sector, Permutation };

inline constexpr int kMaxFullSpaceSites = 22;
inline constexpr std::uint64_t kMaxEnumeratedStates = 50'000'000;

/// Names one of the enumerated configuration spaces.
struct SpaceDescriptor {
  SpaceKind kind = SpaceKind::Full;
  int n = 0;
  int k = 0;

  static SpaceDescriptor full(int n);
  static SpaceDescriptor sector(int n, int k);
  static SpaceDescriptor permutation(int n);

  std::size_t size() const;
  std::string describe() const;

  friend bool operator==(const SpaceDescriptor&, const SpaceDescriptor&) = default;
};

/// {0,1}^V indexed by the occupancy mask itself.
class FullSpace {
 public:
  explicit FullSpace(int n);
  int sites() const noexcept { return n_; }
  std::size_t size() const noexcept { return std::size_t{1} << n_; }
  static Mask unrank(std::size_t index) noexcept { return index; }
  static std::size_t rank(Mask m) noexcept { return m; }

 private:
  int n_;
};

/// k-subsets of V ranked by the combinatorial number system: the subset
/// c_1 < ... < c_k has rank sum_i C(c_i, i). Rank order is increasing mask order.
class SectorSpace {
 public:
  SectorSpace(int n, int k);
  int sites() const noexcept { return n_; }
  int particles() const noexcept { return k_; }
  std::size_t size() const noexcept { return size_; }
  Mask unrank(std::size_t index) const;
  std::size_t rank(Mask m) const;
  /// Next mask with the same popcount (Gosper), i.e. unrank(rank(m) + 1).
  static Mask next(Mask m) noexcept;

 private:
  int n_;
  int k_;
  std::size_t size_;
};

/// Permutations ranked by Lehmer code (lexicographic order of particle_at).
class PermutationSpace {
 public:
  explicit PermutationSpace(int n);
  int sites() const noexcept { return n_; }
  std::size_t size() const noexcept { return size_; }
  Permutation unrank(std::size_t index) const;
  std::size_t rank(const Permutation& p) const;
  std::size_t rank(std::span<const int> particle_at) const;

 private:
  int n_;
  std::size_t size_;
};

/// Index of the image of state `index` under the swap of x and y.
std::size_t swap_index(const SpaceDescriptor& space, std::size_t index, Vertex x, Vertex y);

/// Swap images for a fixed list of vertex pairs, precomputed for every state.
class SwapTable {
 public:
  SwapTable(const SpaceDescriptor& space, std::span<const std::pair<Vertex, Vertex>> pairs);

  std::size_t pair_count() const noexcept { return pairs_; }
  std::size_t state_count() const noexcept { return states_; }
  std::span<const std::uint32_t> targets(std::size_t pair) const {
    return {table_.data() + pair * states_, states_};
  }

 private:
  std::size_t pairs_;
  std::size_t states_;
  std::vector<std::uint32_t> table_;
};

/// Particle count of each state of a full or sector space.
int state_particle_count(const SpaceDescriptor& space, std::size_t index);
/// Occupancy mask of each state of a full or sector space.
Mask state_mask(const SpaceDescriptor& space, std::size_t index);

}  // namespace mpllab
