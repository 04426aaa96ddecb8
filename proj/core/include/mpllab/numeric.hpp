#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace mpllab {

/// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      correction_ += (sum_ - t) + x;
    } else {
      correction_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(double x) noexcept {
    add(x);
    return *this;
  }

  double value() const noexcept { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

double compensated_sum(std::span<const double> values) noexcept;
double compensated_dot(std::span<const double> a, std::span<const double> b) noexcept;

/// Exact sum of doubles, kept as a nonoverlapping expansion of increasing
/// magnitude. The represented value is the exact real sum of everything added,
/// barring overflow.
class ExactSum {
 public:
  void add(double x);
  void subtract(double x) { add(-x); }

  /// True iff the exact sum is zero.
  bool is_zero() const noexcept { return parts_.empty(); }

  /// Nearest double to the exact sum (smallest components accumulated first).
  double value() const noexcept;

  std::span<const double> components() const noexcept { return parts_; }

 private:
  std::vector<double> parts_;
};

/// Exact binomial coefficient; throws ProblemTooLarge on overflow.
std::uint64_t binomial(int n, int k);
std::uint64_t factorial(int n);

}  // namespace mpllab
