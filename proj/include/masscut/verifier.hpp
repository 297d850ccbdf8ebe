#pragma once

#include <span>
#include <vector>

#include "masscut/geometry.hpp"

namespace masscut {

struct VerificationReport {
  std::vector<double> per_mass_imbalance;
  double max_imbalance = 0.0;
  /// Max over masses of boundary weight / total weight.
  double boundary_fraction = 0.0;
  bool pass = false;
  double tol = 0.0;
  double boundary_budget = 0.0;
};

/// Verification thresholds. Exact mode is for instances whose orthant
/// counts can balance exactly; sampled mode for Monte-Carlo or reduced ones.
struct Tolerances {
  double tol = 0.0;
  double boundary_budget = 0.0;

  static constexpr Tolerances exact() { return {0.0, 0.0}; }
  static constexpr Tolerances sampled() { return {1e-2, 1e-3}; }
};

/// max_s |entries[s] - (total - boundary) / 2^h| / total
double imbalance(const MeasureTable& table);

VerificationReport verify(std::span<const Mass> masses, const Arrangement& arrangement,
                          double tol, double boundary_budget, double tau);

/// Uses default_tau(masses).
VerificationReport verify(std::span<const Mass> masses, const Arrangement& arrangement,
                          Tolerances tolerances);

}  // namespace masscut
