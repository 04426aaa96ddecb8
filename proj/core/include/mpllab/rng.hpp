#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace mpllab {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based generator. Draw number i of the stream with key K is
///   splitmix64(splitmix64(K) ^ (i * 0xD1B54A32D192ED03)),
/// so any draw can be recomputed from (key, counter) alone.
///
/// Streams are split by `CounterRng::stream(seed, id)`: the key of stream `id`
/// under `seed` is splitmix64(seed ^ splitmix64(id + 0x632BE59BD9B4E019)).
/// Batch drivers use one stream per instance id, the simulator one per edge
/// and boundary site, so results never depend on scheduling or thread count.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key = 0, std::uint64_t counter = 0) noexcept
      : key_(key), counter_(counter) {}

  static CounterRng stream(std::uint64_t seed, std::uint64_t id) noexcept {
    return CounterRng(splitmix64(seed ^ splitmix64(id + 0x632BE59BD9B4E019ull)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    return splitmix64(mixed_key() ^ (counter_++ * 0xD1B54A32D192ED03ull));
  }

  /// Uniform on the open interval (0, 1).
  double uniform01() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, bound), by rejection (unbiased).
  std::uint64_t below(std::uint64_t bound) noexcept {
    if (bound <= 1) return 0;
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r;
    do {
      r = (*this)();
    } while (r >= limit);
    return r % bound;
  }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  double exponential(double rate) noexcept { return -std::log(uniform01()) / rate; }

  /// Standard normal by Box-Muller; both variates of a pair are used.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t mixed_key() const noexcept { return splitmix64(key_); }

  std::uint64_t key_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace mpllab
