#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace mpllab {

/// Default tolerances, in one place. The CLI overrides them with --tol.
struct Tolerances {
  /// Identities: |lhs - rhs| <= identity * scale.
  double identity = 1e-10;
  /// Inequalities lhs <= rhs: rhs - lhs >= -inequality * scale.
  double inequality = 1e-9;
  /// Margins below this (times scale) are logged as near-equality witnesses.
  double near_equality = 1e-6;
  /// Edge energies of symmetrized functions.
  double symmetry = 1e-12;
  /// Spectral gaps, relative to the random-walk gap.
  double spectral = 1e-8;
};

/// Outcome of one identity or inequality check.
/// Invariant: pass == (margin >= -tolerance), where tolerance is already scaled
/// by max(|lhs|, |rhs|, 1).
struct VerificationReport {
  std::string name;
  nlohmann::json instance = nlohmann::json::object();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json witness = nlohmann::json::object();
  std::string note;
};

double report_scale(double lhs, double rhs) noexcept;

/// lhs <= rhs up to relative slack.
VerificationReport inequality_report(std::string name, double lhs, double rhs, double relative_tol);
/// lhs == rhs up to relative slack; margin = -|lhs - rhs|.
VerificationReport identity_report(std::string name, double lhs, double rhs, double relative_tol);

bool near_equality(const VerificationReport& r, double threshold) noexcept;

nlohmann::json to_json(const VerificationReport& r);

}  // namespace mpllab
