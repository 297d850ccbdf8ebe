#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "masscut/geometry.hpp"
#include "masscut/verifier.hpp"

namespace masscut {

struct SolverConfig {
  std::uint64_t seed = 0;
  std::size_t restarts = 16;
  /// Evaluation budget per restart and smoothing stage.
  std::size_t max_evals = 2000;
  /// Logistic widths as fractions of the bounding-box diagonal; strictly
  /// decreasing.
  std::vector<double> smoothing_schedule = default_schedule();
  double tol = 0.0;
  double boundary_budget = 0.0;
  /// Boundary tolerance in absolute units; defaults to default_tau(masses).
  std::optional<double> tau;
  /// Worker threads for restarts. 0 reads MASSCUT_THREADS, then falls back
  /// to the hardware concurrency.
  std::size_t threads = 0;

  static std::vector<double> default_schedule() { return {0.2, 0.05, 0.01, 0.002}; }
  /// Narrower widths used by ham_sandwich when the schedule was left at
  /// its default.
  static std::vector<double> ham_sandwich_schedule() { return {0.1, 0.02, 0.004, 0.001}; }

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// One line of a strategy trace. `depth` is the nesting level of the
/// reduction that produced it.
struct TraceStep {
  std::size_t depth = 0;
  std::string strategy;
  std::size_t dim = 0;
  std::size_t h = 0;
  std::size_t m = 0;
  /// "beta", "eps" or empty; `values` holds the numbers used.
  std::string parameter;
  std::vector<double> values;
  /// Named measurements, e.g. the imbalances seen at one reduction stage.
  std::map<std::string, double> metrics;
  std::string note;
};

struct Solution {
  /// Empty only when no candidate arrangement could be formed at all.
  std::optional<Arrangement> arrangement;
  VerificationReport report;
  std::vector<TraceStep> trace;
  bool converged = false;
  /// Objective evaluations spent, summed over restarts and stages.
  std::size_t evaluations = 0;
};

/// Sum over masses j and orthant codes s of (mu_js - total_j / 2^h)^2 where
/// mu_js is the logistic-smoothed orthant measure. params holds h blocks of
/// (normal[0..d), offset); normals are renormalized before use. beta is a
/// fraction of the bounding-box diagonal.
double smoothed_objective(std::span<const Mass> masses, std::span<const double> params,
                          std::size_t h, double beta);

/// Multistart annealed simplex search for h planes equipartitioning every
/// mass. Never throws on non-convergence; see Solution::converged.
Solution solve_direct(std::span<const Mass> masses, std::size_t h, const SolverConfig& config);

/// solve_direct with h = 1. Records a warning in the trace when d < m.
Solution ham_sandwich(std::span<const Mass> masses, const SolverConfig& config);

/// Recomputes the verification report for `arrangement` under `config`.
VerificationReport verify_with(std::span<const Mass> masses, const Arrangement& arrangement,
                               const SolverConfig& config);

/// Resolved worker count for a config.
std::size_t worker_count(const SolverConfig& config);

}  // namespace masscut
