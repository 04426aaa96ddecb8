#include "mpllab/states.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "mpllab/error.hpp"
#include "mpllab/numeric.hpp"

namespace mpllab {

namespace {

using BinomialTable = std::array<std::array<std::uint64_t, 65>, 65>;

const BinomialTable& binomials() {
  static const BinomialTable table = [] {
    BinomialTable t{};
    for (int n = 0; n <= 64; ++n) {
      t[n][0] = 1;
      for (int k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k <= n - 1 ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

std::uint64_t choose(int n, int k) noexcept {
  if (k < 0 || n < 0 || k > n) return 0;
  return binomials()[n][k];
}

void check_sites(int n, int limit) {
  if (n < 1 || n > limit) {
    throw Error(ErrorCode::StateSpaceTooLarge,
                "site count " + std::to_string(n) + " outside [1," + std::to_string(limit) + "]");
  }
}

void check_pair(int n, Vertex x, Vertex y) {
  if (x < 0 || x >= n || y < 0 || y >= n) throw Error(ErrorCode::VertexOutOfRange, "swap vertex out of range");
}

}  // namespace

ExclusionConfig::ExclusionConfig(int n, Mask bits) : n_(n), bits_(bits) {
  if (n < 0 || n > 64) throw Error(ErrorCode::InvalidArgument, "ExclusionConfig supports at most 64 sites");
  if (n < 64 && (bits >> n) != 0) throw Error(ErrorCode::InvalidArgument, "occupancy bits beyond site count");
}

ExclusionConfig ExclusionConfig::from_occupancy(std::span<const int> occupancy) {
  Mask m = 0;
  for (std::size_t v = 0; v < occupancy.size(); ++v) {
    if (occupancy[v] != 0 && occupancy[v] != 1) throw Error(ErrorCode::InvalidArgument, "occupancy must be 0 or 1");
    if (occupancy[v]) m |= Mask{1} << v;
  }
  return ExclusionConfig(static_cast<int>(occupancy.size()), m);
}

bool ExclusionConfig::occupied(Vertex v) const {
  if (v < 0 || v >= n_) throw Error(ErrorCode::VertexOutOfRange, "site out of range");
  return (bits_ >> v) & 1u;
}

int ExclusionConfig::particle_count() const noexcept { return std::popcount(bits_); }

std::vector<int> ExclusionConfig::occupancy() const {
  std::vector<int> out(static_cast<std::size_t>(n_));
  for (int v = 0; v < n_; ++v) out[v] = static_cast<int>((bits_ >> v) & 1u);
  return out;
}

ExclusionConfig swap_config(const ExclusionConfig& zeta, Vertex x, Vertex y) {
  check_pair(zeta.size(), x, y);
  if (x == y) throw Error(ErrorCode::SameVertex, "swap needs two distinct sites");
  return ExclusionConfig(zeta.size(), swap_bits(zeta.bits(), x, y));
}

ExclusionConfig flip_config(const ExclusionConfig& zeta, Vertex a) {
  check_pair(zeta.size(), a, a);
  return ExclusionConfig(zeta.size(), zeta.bits() ^ (Mask{1} << a));
}

Permutation::Permutation(std::vector<int> particle_at) : particle_at_(std::move(particle_at)) {
  std::vector<char> seen(particle_at_.size(), 0);
  for (int p : particle_at_) {
    if (p < 0 || static_cast<std::size_t>(p) >= particle_at_.size() || seen[p]) {
      throw Error(ErrorCode::InvalidArgument, "not a permutation");
    }
    seen[p] = 1;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[i] = i;
  return Permutation(std::move(p));
}

Vertex Permutation::position_of(int particle) const {
  auto it = std::find(particle_at_.begin(), particle_at_.end(), particle);
  if (it == particle_at_.end()) throw Error(ErrorCode::InvalidArgument, "no such particle");
  return static_cast<Vertex>(it - particle_at_.begin());
}

void Permutation::swap_vertices(Vertex x, Vertex y) {
  check_pair(size(), x, y);
  std::swap(particle_at_[x], particle_at_[y]);
}

Permutation transpose_perm(const Permutation& eta, Vertex x, Vertex y) {
  if (x == y) throw Error(ErrorCode::SameVertex, "transposition needs two distinct vertices");
  Permutation out = eta;
  out.swap_vertices(x, y);
  return out;
}

ExclusionConfig project_pi_k(const Permutation& eta, int k) {
  if (k < 0 || k > eta.size()) throw Error(ErrorCode::InvalidArgument, "k outside [0, n]");
  Mask m = 0;
  for (int v = 0; v < eta.size(); ++v)
    if (eta.particle_at(v) < k) m |= Mask{1} << v;
  return ExclusionConfig(eta.size(), m);
}

SpaceDescriptor SpaceDescriptor::full(int n) {
  check_sites(n, kMaxFullSpaceSites);
  return {SpaceKind::Full, n, 0};
}

SpaceDescriptor SpaceDescriptor::sector(int n, int k) {
  check_sites(n, 63);
  if (k < 0 || k > n) throw Error(ErrorCode::InvalidArgument, "sector k outside [0, n]");
  if (choose(n, k) > kMaxEnumeratedStates) {
    throw Error(ErrorCode::StateSpaceTooLarge, "sector C(" + std::to_string(n) + "," + std::to_string(k) +
                                                   ") exceeds the enumeration cap");
  }
  return {SpaceKind::Sector, n, k};
}

SpaceDescriptor SpaceDescriptor::permutation(int n) {
  check_sites(n, 20);
  if (factorial(n) > kMaxEnumeratedStates) {
    throw Error(ErrorCode::StateSpaceTooLarge, std::to_string(n) + "! exceeds the enumeration cap");
  }
  return {SpaceKind::Permutation, n, 0};
}

std::size_t SpaceDescriptor::size() const {
  switch (kind) {
    case SpaceKind::Full: return std::size_t{1} << n;
    case SpaceKind::Sector: return static_cast<std::size_t>(choose(n, k));
    case SpaceKind::Permutation: return static_cast<std::size_t>(factorial(n));
  }
  return 0;
}

std::string SpaceDescriptor::describe() const {
  switch (kind) {
    case SpaceKind::Full: return "full(n=" + std::to_string(n) + ")";
    case SpaceKind::Sector: return "sector(n=" + std::to_string(n) + ",k=" + std::to_string(k) + ")";
    case SpaceKind::Permutation: return "permutation(n=" + std::to_string(n) + ")";
  }
  return "unknown";
}

FullSpace::FullSpace(int n) : n_(n) { check_sites(n, kMaxFullSpaceSites); }

SectorSpace::SectorSpace(int n, int k) : n_(n), k_(k) {
  size_ = SpaceDescriptor::sector(n, k).size();
}

Mask SectorSpace::unrank(std::size_t index) const {
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "sector index out of range");
  Mask m = 0;
  std::uint64_t r = index;
  int c = n_ - 1;
  for (int i = k_; i >= 1; --i) {
    while (choose(c, i) > r) --c;
    r -= choose(c, i);
    m |= Mask{1} << c;
    --c;
  }
  return m;
}

std::size_t SectorSpace::rank(Mask m) const {
  std::size_t r = 0;
  int i = 0;
  while (m != 0) {
    const int c = std::countr_zero(m);
    r += static_cast<std::size_t>(choose(c, ++i));
    m &= m - 1;
  }
  return r;
}

Mask SectorSpace::next(Mask m) noexcept {
  if (m == 0) return 0;
  const Mask c = m & (~m + 1);
  const Mask r = m + c;
  return (((r ^ m) >> 2) / c) | r;
}

PermutationSpace::PermutationSpace(int n) : n_(n) { size_ = SpaceDescriptor::permutation(n).size(); }

Permutation PermutationSpace::unrank(std::size_t index) const {
  if (index >= size_) throw Error(ErrorCode::InvalidArgument, "permutation index out of range");
  std::vector<int> pool(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) pool[i] = i;
  std::vector<int> out;
  out.reserve(pool.size());
  std::uint64_t r = index;
  for (int i = n_ - 1; i >= 0; --i) {
    const std::uint64_t f = factorial(i);
    const auto digit = static_cast<std::size_t>(r / f);
    r %= f;
    out.push_back(pool[digit]);
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(digit));
  }
  return Permutation(std::move(out));
}

std::size_t PermutationSpace::rank(std::span<const int> a) const {
  if (static_cast<int>(a.size()) != n_) throw Error(ErrorCode::SpaceMismatch, "permutation length mismatch");
  std::size_t r = 0;
  for (int i = 0; i < n_; ++i) {
    std::size_t smaller = 0;
    for (int j = i + 1; j < n_; ++j)
      if (a[j] < a[i]) ++smaller;
    r = r * static_cast<std::size_t>(n_ - i) + smaller;
  }
  return r;
}

std::size_t PermutationSpace::rank(const Permutation& p) const { return rank(p.particles()); }

std::size_t swap_index(const SpaceDescriptor& space, std::size_t index, Vertex x, Vertex y) {
  check_pair(space.n, x, y);
  switch (space.kind) {
    case SpaceKind::Full: return swap_bits(index, x, y);
    case SpaceKind::Sector: {
      SectorSpace s(space.n, space.k);
      return s.rank(swap_bits(s.unrank(index), x, y));
    }
    case SpaceKind::Permutation: {
      PermutationSpace s(space.n);
      Permutation p = s.unrank(index);
      p.swap_vertices(x, y);
      return s.rank(p);
    }
  }
  return index;
}

SwapTable::SwapTable(const SpaceDescriptor& space, std::span<const std::pair<Vertex, Vertex>> pairs)
    : pairs_(pairs.size()), states_(space.size()) {
  for (const auto& [x, y] : pairs) check_pair(space.n, x, y);
  if (states_ > 0xFFFFFFFFull) throw Error(ErrorCode::StateSpaceTooLarge, "swap table index overflow");
  if (pairs_ * states_ > 400'000'000ull) throw Error(ErrorCode::StateSpaceTooLarge, "swap table too large");
  table_.resize(pairs_ * states_);
  auto store = [&](std::size_t pair, std::size_t state, std::size_t target) {
    table_[pair * states_ + state] = static_cast<std::uint32_t>(target);
  };
  switch (space.kind) {
    case SpaceKind::Full:
      for (std::size_t s = 0; s < states_; ++s)
        for (std::size_t p = 0; p < pairs_; ++p) store(p, s, swap_bits(s, pairs[p].first, pairs[p].second));
      break;
    case SpaceKind::Sector: {
      SectorSpace sector(space.n, space.k);
      Mask m = states_ > 0 ? sector.unrank(0) : 0;
      for (std::size_t s = 0; s < states_; ++s, m = SectorSpace::next(m)) {
        for (std::size_t p = 0; p < pairs_; ++p) {
          store(p, s, sector.rank(swap_bits(m, pairs[p].first, pairs[p].second)));
        }
      }
      break;
    }
    case SpaceKind::Permutation: {
      PermutationSpace perms(space.n);
      std::vector<int> a(static_cast<std::size_t>(space.n));
      for (int i = 0; i < space.n; ++i) a[i] = i;
      for (std::size_t s = 0; s < states_; ++s) {
        for (std::size_t p = 0; p < pairs_; ++p) {
          std::swap(a[pairs[p].first], a[pairs[p].second]);
          store(p, s, perms.rank(a));
          std::swap(a[pairs[p].first], a[pairs[p].second]);
        }
        std::next_permutation(a.begin(), a.end());
      }
      break;
    }
  }
}

int state_particle_count(const SpaceDescriptor& space, std::size_t index) {
  return std::popcount(state_mask(space, index));
}

Mask state_mask(const SpaceDescriptor& space, std::size_t index) {
  switch (space.kind) {
    case SpaceKind::Full: return index;
    case SpaceKind::Sector: return SectorSpace(space.n, space.k).unrank(index);
    case SpaceKind::Permutation: break;
  }
  throw Error(ErrorCode::SpaceMismatch, "permutation states have no occupancy mask");
}

}  // namespace mpllab
