#pragma once

// Solver strategies that reduce an instance (d, h, m) to smaller ones:
//
//  * lemma1 bisects all m masses with one ham-sandwich cut and solves the
//    resulting 2m masses with h - 1 planes;
//  * lemma2 lifts the m masses into R^{d+1} by thickening, adds a ball
//    above the base slice as an extra mass, solves (d + 1, h, m + 1) and
//    restricts the planes back to the slice, repeating for a decreasing
//    thickness schedule.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "masscut/geometry.hpp"
#include "masscut/solver.hpp"

namespace masscut {

enum class SplitMode {
  /// Points on the plane are an error.
  Exact,
  /// Points on the plane alternate between the halves by index.
  Tolerant,
};

/// (+ side, - side). Throws BoundaryPoints (exact mode) or EmptyHalf.
std::pair<Mass, Mass> split_mass(const Mass& mass, const Hyperplane& plane, double tau,
                                 SplitMode mode);

/// Slab thicknesses for lemma2, as fractions of the bounding-box diagonal.
struct EpsilonSchedule {
  std::vector<double> values{0.1, 0.03, 0.01, 0.003, 0.001};

  /// Nonempty, strictly decreasing, positive.
  void validate() const;
};

struct Lemma2Options {
  EpsilonSchedule schedule;
  std::size_t ball_n = 4096;
  /// Stop at the first thickness whose restricted arrangement verifies.
  bool stop_on_pass = true;
};

class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual Solution solve(std::span<const Mass> masses, std::size_t h,
                         const SolverConfig& config) const = 0;
};

using StrategyPtr = std::shared_ptr<const Strategy>;

StrategyPtr direct_strategy();
/// h = 1 goes to ham_sandwich; h >= 2 with d >= m tries lemma1 and falls
/// back to direct; anything else is direct.
StrategyPtr auto_strategy();
StrategyPtr lemma1_strategy(StrategyPtr inner = auto_strategy());
StrategyPtr lemma2_strategy(Lemma2Options options = {}, StrategyPtr inner = auto_strategy());

/// Throws PreconditionViolated when h < 2 or d < m.
Solution reduce_lemma1(std::span<const Mass> masses, std::size_t h, const SolverConfig& config,
                       const Strategy& inner);

Solution reduce_lemma2(std::span<const Mass> masses, std::size_t h, const SolverConfig& config,
                       const Lemma2Options& options, const Strategy& inner);

enum class StrategyKind { Direct, Lemma1, Lemma2, Auto };

std::optional<StrategyKind> parse_strategy(std::string_view name);
std::string_view to_string(StrategyKind kind);

/// Dispatches to the chosen strategy with auto as the inner strategy of the
/// reductions.
Solution solve(std::span<const Mass> masses, std::size_t h, StrategyKind kind,
               const SolverConfig& config, const Lemma2Options& lemma2 = {});

}  // namespace masscut
