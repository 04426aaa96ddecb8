#include "mpllab/state_function.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>

#include "mpllab/error.hpp"
#include "mpllab/numeric.hpp"

namespace mpllab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

template <class T>
void put_le(std::ostream& out, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  out.write(buf, 8);
}

template <class T>
T get_le(std::istream& in) {
  unsigned char buf[8];
  if (!in.read(reinterpret_cast<char*>(buf), 8)) throw Error(ErrorCode::ParseError, "truncated binary state function");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{buf[i]} << (8 * i);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

}  // namespace

StateFunction::StateFunction(const SpaceDescriptor& space, std::vector<double> values)
    : space_(space), values_(std::move(values)) {
  if (values_.size() != space_.size()) {
    throw Error(ErrorCode::SpaceMismatch, "state function length " + std::to_string(values_.size()) +
                                              " does not match " + space_.describe());
  }
}

StateFunction StateFunction::constant(const SpaceDescriptor& space, double value) {
  return StateFunction(space, std::vector<double>(space.size(), value));
}

StateFunction StateFunction::random_normal(const SpaceDescriptor& space, CounterRng& rng) {
  std::vector<double> v(space.size());
  for (double& x : v) x = rng.normal();
  return StateFunction(space, std::move(v));
}

Measure::Measure(const SpaceDescriptor& space, std::vector<double> log_weights)
    : space_(space), log_weights_(std::move(log_weights)) {
  if (log_weights_.size() != space_.size()) throw Error(ErrorCode::SpaceMismatch, "measure length mismatch");
  weights_.resize(log_weights_.size());
  std::transform(log_weights_.begin(), log_weights_.end(), weights_.begin(), [](double l) { return std::exp(l); });
}

Measure Measure::from_weights(const SpaceDescriptor& space, std::vector<double> weights) {
  std::vector<double> logs(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "measure weights must be nonnegative");
    logs[i] = safe_log(weights[i]);
  }
  Measure m(space, std::move(logs));
  m.weights_ = std::move(weights);
  return m;
}

double Measure::total_mass() const noexcept { return compensated_sum(weights_); }

double Measure::mean(std::span<const double> h) const {
  if (h.size() != weights_.size()) throw Error(ErrorCode::SpaceMismatch, "integrand length mismatch");
  return compensated_dot(weights_, h);
}

double Measure::mean(const StateFunction& h) const {
  if (!(h.space() == space_)) {
    throw Error(ErrorCode::SpaceMismatch, h.space().describe() + " vs measure on " + space_.describe());
  }
  return mean(h.values());
}

Measure bernoulli_measure(int n, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in [0,1]");
  const auto space = SpaceDescriptor::full(n);
  const double la = safe_log(alpha);
  const double lb = safe_log(1.0 - alpha);
  std::vector<double> logs(space.size());
  std::vector<double> weights(space.size());
  for (std::size_t m = 0; m < logs.size(); ++m) {
    const int k = std::popcount(m);
    logs[m] = (k == 0 ? 0.0 : k * la) + (k == n ? 0.0 : (n - k) * lb);
    weights[m] = (k == 0 ? 1.0 : std::pow(alpha, k)) * (k == n ? 1.0 : std::pow(1.0 - alpha, n - k));
  }
  Measure out(space, std::move(logs));
  out.weights_ = std::move(weights);
  return out;
}

Measure uniform_measure(const SpaceDescriptor& space) {
  return Measure::from_weights(space, std::vector<double>(space.size(), 1.0 / static_cast<double>(space.size())));
}

Measure restrict_to_sector(const Measure& full, int k) {
  if (full.space().kind != SpaceKind::Full) throw Error(ErrorCode::SpaceMismatch, "restriction needs a full-space measure");
  const SectorSpace sector(full.space().n, k);
  std::vector<double> logs(sector.size());
  std::vector<double> weights(sector.size());
  Mask m = sector.unrank(0);
  for (std::size_t i = 0; i < logs.size(); ++i, m = SectorSpace::next(m)) {
    logs[i] = full.log_weights()[m];
    weights[i] = full.weight(m);
  }
  Measure out(SpaceDescriptor::sector(full.space().n, k), std::move(logs));
  out.weights_ = std::move(weights);
  return out;
}

double sector_mass(int n, int k, double alpha) {
  if (k < 0 || k > n) return 0.0;
  const double a = k == 0 ? 1.0 : std::pow(alpha, k);
  const double b = k == n ? 1.0 : std::pow(1.0 - alpha, n - k);
  return static_cast<double>(binomial(n, k)) * a * b;
}

StateFunction lift_function(const StateFunction& f) {
  const SpaceDescriptor& s = f.space();
  if (s.kind != SpaceKind::Sector) throw Error(ErrorCode::SpaceMismatch, "lift needs a sector function");
  const auto target = SpaceDescriptor::permutation(s.n);
  const SectorSpace sector(s.n, s.k);
  std::vector<double> out(target.size());
  std::vector<int> a(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) a[i] = i;
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    Mask m = 0;
    for (int v = 0; v < s.n; ++v)
      if (a[v] < s.k) m |= Mask{1} << v;
    out[idx] = f[sector.rank(m)];
    std::next_permutation(a.begin(), a.end());
  }
  return StateFunction(target, std::move(out));
}

void write_binary(std::ostream& out, const StateFunction& f) {
  put_le<std::uint64_t>(out, f.size());
  for (double v : f.values()) put_le<double>(out, v);
  if (!out) throw Error(ErrorCode::IoError, "failed writing state function");
}

StateFunction read_binary(std::istream& in, const SpaceDescriptor& space) {
  const auto n = get_le<std::uint64_t>(in);
  if (n != space.size()) throw Error(ErrorCode::SpaceMismatch, "binary length does not match " + space.describe());
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = get_le<double>(in);
  return StateFunction(space, std::move(v));
}

nlohmann::json to_json(const StateFunction& f) {
  return nlohmann::json(std::vector<double>(f.values().begin(), f.values().end()));
}

StateFunction state_function_from_json(const SpaceDescriptor& space, const nlohmann::json& values) {
  if (!values.is_array()) throw Error(ErrorCode::ParseError, "state function JSON must be an array");
  return StateFunction(space, values.get<std::vector<double>>());
}

}  // namespace mpllab
