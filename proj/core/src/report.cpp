#include "mpllab/report.hpp"

#include <algorithm>
#include <cmath>

namespace mpllab {

double report_scale(double lhs, double rhs) noexcept {
  return std::max({std::abs(lhs), std::abs(rhs), 1.0});
}

VerificationReport inequality_report(std::string name, double lhs, double rhs, double relative_tol) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tolerance = relative_tol * report_scale(lhs, rhs);
  r.pass = r.margin >= -r.tolerance;
  return r;
}

VerificationReport identity_report(std::string name, double lhs, double rhs, double relative_tol) {
  VerificationReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = -std::abs(lhs - rhs);
  r.tolerance = relative_tol * report_scale(lhs, rhs);
  r.pass = r.margin >= -r.tolerance;
  return r;
}

bool near_equality(const VerificationReport& r, double threshold) noexcept {
  return std::abs(r.margin) < threshold * report_scale(r.lhs, r.rhs);
}

nlohmann::json to_json(const VerificationReport& r) {
  nlohmann::json j{{"name", r.name},     {"instance", r.instance}, {"lhs", r.lhs},
                   {"rhs", r.rhs},       {"margin", r.margin},     {"tolerance", r.tolerance},
                   {"pass", r.pass},     {"witness", r.witness}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

}  // namespace mpllab
