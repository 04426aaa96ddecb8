#include "mpllab/dirichlet.hpp"

#include <bit>

#include "mpllab/error.hpp"
#include "mpllab/numeric.hpp"
#include "mpllab/reduction.hpp"

namespace mpllab {

namespace {

std::vector<std::pair<Vertex, Vertex>> edge_pairs(std::span<const Edge> edges) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(edges.size());
  for (const Edge& e : edges) pairs.emplace_back(e.u, e.v);
  return pairs;
}

void check_match(const Measure& mu, const StateFunction& f) {
  if (!(mu.space() == f.space())) {
    throw Error(ErrorCode::SpaceMismatch, "measure on " + mu.space().describe() + ", function on " +
                                              f.space().describe());
  }
}

// mu[(grad f)^2] for every pair, one compensated sum per pair.
std::vector<double> gradient_square_means(const Measure& mu, const StateFunction& f,
                                          std::span<const std::pair<Vertex, Vertex>> pairs) {
  check_match(mu, f);
  std::vector<double> out(pairs.size());
  const auto v = f.values();
  const auto w = mu.weights();
  if (f.space().kind == SpaceKind::Full) {
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      CompensatedSum s;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = v[swap_bits(i, pairs[p].first, pairs[p].second)] - v[i];
        s.add(w[i] * d * d);
      }
      out[p] = s.value();
    }
    return out;
  }
  const SwapTable table(f.space(), pairs);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto t = table.targets(p);
    CompensatedSum s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double d = v[t[i]] - v[i];
      s.add(w[i] * d * d);
    }
    out[p] = s.value();
  }
  return out;
}

void check_boundary_rates(const WeightedGraph& g, const std::vector<BoundaryRate>& rates) {
  for (const BoundaryRate& r : rates) {
    g.check_vertex(r.site);
    if (!(r.birth >= 0.0 && r.death >= 0.0) || !std::isfinite(r.birth) || !std::isfinite(r.death)) {
      throw Error(ErrorCode::InvalidArgument, "boundary rates must be finite and nonnegative");
    }
  }
}

}  // namespace

const char* to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::ExclusionFull: return "exclusion-full";
    case GeneratorKind::ExclusionSector: return "exclusion-sector";
    case GeneratorKind::Interchange: return "interchange";
    case GeneratorKind::Boundary: return "boundary";
  }
  return "unknown";
}

GeneratorOperator::GeneratorOperator(GeneratorKind kind, const WeightedGraph& g, SpaceDescriptor space)
    : kind_(kind), graph_(g), space_(space) {
  if (space_.kind != SpaceKind::Full) {
    const auto pairs = edge_pairs(graph_.edges());
    swaps_.emplace(space_, pairs);
  }
}

GeneratorOperator GeneratorOperator::exclusion_full(const WeightedGraph& g) {
  return GeneratorOperator(GeneratorKind::ExclusionFull, g, SpaceDescriptor::full(g.vertex_count()));
}

GeneratorOperator GeneratorOperator::exclusion_sector(const WeightedGraph& g, int k) {
  return GeneratorOperator(GeneratorKind::ExclusionSector, g, SpaceDescriptor::sector(g.vertex_count(), k));
}

GeneratorOperator GeneratorOperator::interchange(const WeightedGraph& g) {
  return GeneratorOperator(GeneratorKind::Interchange, g, SpaceDescriptor::permutation(g.vertex_count()));
}

GeneratorOperator GeneratorOperator::boundary(const WeightedGraph& g, std::vector<BoundaryRate> rates,
                                              bool include_bulk) {
  check_boundary_rates(g, rates);
  GeneratorOperator op(GeneratorKind::Boundary, g, SpaceDescriptor::full(g.vertex_count()));
  op.rates_ = std::move(rates);
  op.bulk_ = include_bulk;
  return op;
}

std::size_t GeneratorOperator::swap_target(std::size_t edge, std::size_t state) const {
  if (swaps_) return swaps_->targets(edge)[state];
  const Edge& e = graph_.edge(edge);
  return swap_bits(state, e.u, e.v);
}

StateFunction GeneratorOperator::apply(const StateFunction& f) const {
  if (!(f.space() == space_)) {
    throw Error(ErrorCode::SpaceMismatch, "generator on " + space_.describe() + ", function on " +
                                              f.space().describe());
  }
  const auto v = f.values();
  std::vector<double> out(v.size(), 0.0);
  if (bulk_) {
    for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
      const double c = graph_.edge(e).c;
      for (std::size_t i = 0; i < v.size(); ++i) out[i] += c * (v[swap_target(e, i)] - v[i]);
    }
  }
  for (const BoundaryRate& r : rates_) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      const bool occupied = (i >> r.site) & 1u;
      const double rate = occupied ? r.death : r.birth;
      out[i] += rate * (v[i ^ (std::size_t{1} << r.site)] - v[i]);
    }
  }
  return StateFunction(space_, std::move(out));
}

Eigen::SparseMatrix<double> GeneratorOperator::matrix() const {
  const std::size_t n = space_.size();
  if (n > kMaterializeLimit) {
    throw Error(ErrorCode::ProblemTooLarge, space_.describe() + " is too large to materialize; apply matrix-free");
  }
  std::vector<Eigen::Triplet<double>> t;
  if (bulk_) {
    t.reserve(2 * n * graph_.edge_count());
    for (std::size_t e = 0; e < graph_.edge_count(); ++e) {
      const double c = graph_.edge(e).c;
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = swap_target(e, i);
        if (j == i) continue;
        t.emplace_back(static_cast<int>(i), static_cast<int>(j), c);
        t.emplace_back(static_cast<int>(i), static_cast<int>(i), -c);
      }
    }
  }
  for (const BoundaryRate& r : rates_) {
    for (std::size_t i = 0; i < n; ++i) {
      const double rate = ((i >> r.site) & 1u) ? r.death : r.birth;
      if (rate == 0.0) continue;
      t.emplace_back(static_cast<int>(i), static_cast<int>(i ^ (std::size_t{1} << r.site)), rate);
      t.emplace_back(static_cast<int>(i), static_cast<int>(i), -rate);
    }
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

StateFunction apply_generator(const GeneratorOperator& op, const StateFunction& f) { return op.apply(f); }

StateFunction gradient_xy(const StateFunction& f, Vertex x, Vertex y) {
  if (x == y) throw Error(ErrorCode::SameVertex, "gradient needs two distinct vertices");
  const std::pair<Vertex, Vertex> pair{x, y};
  const SwapTable table(f.space(), std::span(&pair, 1));
  const auto t = table.targets(0);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f[t[i]] - f[i];
  return StateFunction(f.space(), std::move(out));
}

double gradient_square_mean(const Measure& mu, const StateFunction& f, Vertex x, Vertex y) {
  if (x == y) throw Error(ErrorCode::SameVertex, "gradient needs two distinct vertices");
  const std::pair<Vertex, Vertex> pair{x, y};
  return gradient_square_means(mu, f, std::span(&pair, 1))[0];
}

double energy(std::span<const Edge> edges, const Measure& mu, const StateFunction& f) {
  const auto pairs = edge_pairs(edges);
  const auto means = gradient_square_means(mu, f, pairs);
  CompensatedSum s;
  for (std::size_t e = 0; e < edges.size(); ++e) s.add(edges[e].c * means[e]);
  return 0.5 * s.value();
}

double energy(const WeightedGraph& g, const Measure& mu, const StateFunction& f) {
  if (f.space().n != g.vertex_count()) throw Error(ErrorCode::SpaceMismatch, "function and graph sizes differ");
  return energy(g.edges(), mu, f);
}

double energy_generator_form(const GeneratorOperator& op, const Measure& mu, const StateFunction& f) {
  if (op.kind() == GeneratorKind::Boundary) {
    throw Error(ErrorCode::InvalidArgument, "boundary generator is not reversible; no Dirichlet form");
  }
  check_match(mu, f);
  const StateFunction lf = op.apply(f);
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) s.add(-mu.weight(i) * f[i] * lf[i]);
  return s.value();
}

StateFunction project_sector(const StateFunction& f, int k) {
  if (f.space().kind != SpaceKind::Full) throw Error(ErrorCode::SpaceMismatch, "projection needs a full-space function");
  const SectorSpace sector(f.space().n, k);
  std::vector<double> out(sector.size());
  Mask m = sector.unrank(0);
  for (std::size_t i = 0; i < out.size(); ++i, m = SectorSpace::next(m)) out[i] = f[m];
  return StateFunction(SpaceDescriptor::sector(f.space().n, k), std::move(out));
}

StateFunction assemble_sectors(std::span<const StateFunction> sectors) {
  if (sectors.empty()) throw Error(ErrorCode::InvalidArgument, "no sectors given");
  const int n = sectors.front().space().n;
  if (sectors.size() != static_cast<std::size_t>(n + 1)) {
    throw Error(ErrorCode::InvalidArgument, "need one sector function for each k = 0..n");
  }
  const auto full = SpaceDescriptor::full(n);
  std::vector<double> out(full.size());
  for (int k = 0; k <= n; ++k) {
    const StateFunction& s = sectors[k];
    if (!(s.space() == SpaceDescriptor::sector(n, k))) throw Error(ErrorCode::SpaceMismatch, "sectors out of order");
    const SectorSpace sector(n, k);
    Mask m = sector.unrank(0);
    for (std::size_t i = 0; i < s.size(); ++i, m = SectorSpace::next(m)) out[m] = s[i];
  }
  return StateFunction(full, std::move(out));
}

EnergyDecomposition decompose_energy(const WeightedGraph& g, double alpha, const StateFunction& f) {
  const int n = g.vertex_count();
  if (!(f.space() == SpaceDescriptor::full(n))) throw Error(ErrorCode::SpaceMismatch, "need a full-space function");
  EnergyDecomposition d;
  d.alpha = alpha;
  d.total = energy(g, bernoulli_measure(n, alpha), f);
  const bool lift = n <= kLiftLimit;
  const auto nu = lift ? std::optional<Measure>(uniform_measure(SpaceDescriptor::permutation(n))) : std::nullopt;
  CompensatedSum sector_sum;
  CompensatedSum lifted_sum;
  for (int k = 0; k <= n; ++k) {
    SectorEnergy s;
    s.k = k;
    s.mass = sector_mass(n, k, alpha);
    const StateFunction fk = project_sector(f, k);
    s.energy = energy(g, uniform_measure(fk.space()), fk);
    sector_sum.add(s.mass * s.energy);
    if (lift) {
      s.lifted_energy = energy(g, *nu, lift_function(fk));
      lifted_sum.add(s.mass * *s.lifted_energy);
    }
    d.sectors.push_back(s);
  }
  d.sector_sum = sector_sum.value();
  if (lift) d.lifted_sum = lifted_sum.value();
  return d;
}

nlohmann::json to_json(const EnergyDecomposition& d) {
  nlohmann::json sectors = nlohmann::json::array();
  for (const SectorEnergy& s : d.sectors) {
    nlohmann::json j{{"k", s.k}, {"mass", s.mass}, {"energy", s.energy}};
    if (s.lifted_energy) j["lifted_energy"] = *s.lifted_energy;
    sectors.push_back(std::move(j));
  }
  nlohmann::json out{{"alpha", d.alpha}, {"total", d.total}, {"sector_sum", d.sector_sum}, {"sectors", sectors}};
  if (d.lifted_sum) out["lifted_sum"] = *d.lifted_sum;
  return out;
}

std::vector<double> reduced_energy_chain(const WeightedGraph& g, Vertex x, Vertex y, const Measure& mu,
                                         const StateFunction& f) {
  if (f.space().n != g.vertex_count()) throw Error(ErrorCode::SpaceMismatch, "function and graph sizes differ");
  const ReductionTrace trace = effective_resistance(g, x, y).trace;
  std::vector<double> out;
  out.push_back(energy(trace.initial, mu, f));
  for (const ReductionStep& step : trace.steps) out.push_back(energy(step.edges, mu, f));
  return out;
}

std::vector<double> reduced_energy_chain(const WeightedGraph& g, Vertex x, Vertex y, std::span<const double> h) {
  if (h.size() != static_cast<std::size_t>(g.vertex_count())) {
    throw Error(ErrorCode::InvalidArgument, "vertex function has wrong length");
  }
  const ReductionTrace trace = effective_resistance(g, x, y).trace;
  std::vector<double> out;
  out.push_back(el_energy(trace.initial, h));
  for (const ReductionStep& step : trace.steps) out.push_back(el_energy(step.edges, h));
  return out;
}

}  // namespace mpllab
