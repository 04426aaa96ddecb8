#include "mpllab/numeric.hpp"

#include <limits>
#include <string>

#include "mpllab/error.hpp"

namespace mpllab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::NonpositiveConductance: return "NonpositiveConductance";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooFewVertices: return "TooFewVertices";
    case ErrorCode::SameVertex: return "SameVertex";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ProblemTooLarge: return "ProblemTooLarge";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::ZeroEnergy: return "ZeroEnergy";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return s.value();
}

double compensated_dot(std::span<const double> a, std::span<const double> b) noexcept {
  CompensatedSum s;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) s.add(a[i] * b[i]);
  return s.value();
}

namespace {

// Knuth's branch-free two-sum: a + b == hi + lo exactly.
inline void two_sum(double a, double b, double& hi, double& lo) noexcept {
  hi = a + b;
  const double bv = hi - a;
  const double av = hi - bv;
  lo = (a - av) + (b - bv);
}

}  // namespace

void ExactSum::add(double x) {
  // Shewchuk's GROW-EXPANSION with zero elimination.
  double q = x;
  std::size_t out = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    double hi;
    double lo;
    two_sum(q, parts_[i], hi, lo);
    q = hi;
    if (lo != 0.0) parts_[out++] = lo;
  }
  parts_.resize(out);
  if (q != 0.0) parts_.push_back(q);
}

double ExactSum::value() const noexcept {
  double s = 0.0;
  for (double p : parts_) s += p;
  return s;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // After step i the partial product is C(n - k + i, i), never above the result.
  __extension__ using Wide = unsigned __int128;
  Wide result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw Error(ErrorCode::ProblemTooLarge,
                  "binomial(" + std::to_string(n) + "," + std::to_string(k) + ") overflows");
    }
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t factorial(int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative factorial");
  if (n > 20) throw Error(ErrorCode::ProblemTooLarge, "factorial overflows beyond 20!");
  std::uint64_t result = 1;
  for (int i = 2; i <= n; ++i) result *= static_cast<std::uint64_t>(i);
  return result;
}

}  // namespace mpllab
