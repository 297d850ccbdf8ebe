#include "masscut/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "masscut/errors.hpp"
#include "masscut/rng.hpp"

namespace masscut {
namespace {

// Default report for a reduction that produced no arrangement.
VerificationReport failed_report(std::size_t masses, const SolverConfig& config) {
  VerificationReport r;
  r.per_mass_imbalance.assign(masses, 1.0);
  r.max_imbalance = 1.0;
  r.boundary_fraction = 0.0;
  r.pass = false;
  r.tol = config.tol;
  r.boundary_budget = config.boundary_budget;
  return r;
}

void append_nested(std::vector<TraceStep>& trace, const std::vector<TraceStep>& nested) {
  for (auto step : nested) {
    ++step.depth;
    trace.push_back(std::move(step));
  }
}

class DirectStrategy final : public Strategy {
 public:
  std::string name() const override { return "direct"; }
  Solution solve(std::span<const Mass> masses, std::size_t h,
                 const SolverConfig& config) const override {
    return solve_direct(masses, h, config);
  }
};

class Lemma1Strategy final : public Strategy {
 public:
  explicit Lemma1Strategy(StrategyPtr inner) : inner_(std::move(inner)) {}
  std::string name() const override { return "lemma1"; }
  Solution solve(std::span<const Mass> masses, std::size_t h,
                 const SolverConfig& config) const override {
    return reduce_lemma1(masses, h, config, *inner_);
  }

 private:
  StrategyPtr inner_;
};

class Lemma2Strategy final : public Strategy {
 public:
  Lemma2Strategy(Lemma2Options options, StrategyPtr inner)
      : options_(std::move(options)), inner_(std::move(inner)) {}
  std::string name() const override { return "lemma2"; }
  Solution solve(std::span<const Mass> masses, std::size_t h,
                 const SolverConfig& config) const override {
    return reduce_lemma2(masses, h, config, options_, *inner_);
  }

 private:
  Lemma2Options options_;
  StrategyPtr inner_;
};

class AutoStrategy final : public Strategy {
 public:
  std::string name() const override { return "auto"; }
  Solution solve(std::span<const Mass> masses, std::size_t h,
                 const SolverConfig& config) const override {
    const std::size_t d = common_dim(masses);
    const std::size_t m = masses.size();
    TraceStep head{0, "auto", d, h, m, "", {}, {}, ""};
    if (h == 1) {
      head.note = "h=1: ham_sandwich";
      return with_head(std::move(head), ham_sandwich(masses, config));
    }
    if (d < m) {
      head.note = "d<m: direct";
      return with_head(std::move(head), solve_direct(masses, h, config));
    }
    Solution first = reduce_lemma1(masses, h, config, *this);
    if (first.converged) {
      head.note = "lemma1";
      return with_head(std::move(head), std::move(first));
    }
    head.note = "lemma1 did not converge; falling back to direct";
    Solution fallback = solve_direct(masses, h, config);
    fallback.evaluations += first.evaluations;
    std::vector<TraceStep> trace{head};
    append_nested(trace, first.trace);
    append_nested(trace, fallback.trace);
    fallback.trace = std::move(trace);
    return fallback;
  }

 private:
  static Solution with_head(TraceStep head, Solution sol) {
    std::vector<TraceStep> trace{std::move(head)};
    append_nested(trace, sol.trace);
    sol.trace = std::move(trace);
    return sol;
  }
};

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

std::pair<Mass, Mass> split_mass(const Mass& mass, const Hyperplane& plane, double tau,
                                 SplitMode mode) {
  if (mass.dim() != plane.dim()) throw DimensionMismatch("split_mass: dimension mismatch");
  std::vector<Point> plus, minus;
  std::vector<double> w_plus, w_minus;
  bool next_boundary_plus = true;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const Point x = mass.point(i);
    int side = side_of(x, plane, tau);
    if (side == 0) {
      if (mode == SplitMode::Exact) {
        throw BoundaryPoints("split_mass: point " + std::to_string(i) + " lies on the plane");
      }
      side = next_boundary_plus ? +1 : -1;
      next_boundary_plus = !next_boundary_plus;
    }
    if (side > 0) {
      plus.push_back(x);
      w_plus.push_back(mass.weight(i));
    } else {
      minus.push_back(x);
      w_minus.push_back(mass.weight(i));
    }
  }
  if (plus.empty() || minus.empty()) throw EmptyHalf("split_mass: one side is empty");
  return {Mass(mass.dim(), plus, std::move(w_plus)), Mass(mass.dim(), minus, std::move(w_minus))};
}

void EpsilonSchedule::validate() const {
  if (values.empty()) throw InvalidArgument("epsilon schedule: empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw InvalidArgument("epsilon schedule: values must be positive");
    if (i > 0 && !(values[i] < values[i - 1])) {
      throw InvalidArgument("epsilon schedule: values must be strictly decreasing");
    }
  }
}

StrategyPtr direct_strategy() { return std::make_shared<DirectStrategy>(); }
StrategyPtr auto_strategy() { return std::make_shared<AutoStrategy>(); }
StrategyPtr lemma1_strategy(StrategyPtr inner) {
  return std::make_shared<Lemma1Strategy>(std::move(inner));
}
StrategyPtr lemma2_strategy(Lemma2Options options, StrategyPtr inner) {
  return std::make_shared<Lemma2Strategy>(std::move(options), std::move(inner));
}

Solution reduce_lemma1(std::span<const Mass> masses, std::size_t h, const SolverConfig& config,
                       const Strategy& inner) {
  const std::size_t d = common_dim(masses);
  const std::size_t m = masses.size();
  if (h < 2) throw PreconditionViolated("lemma1: needs h >= 2");
  if (d < m) {
    throw PreconditionViolated("lemma1: the bisecting step needs d >= m (d=" + std::to_string(d) +
                               ", m=" + std::to_string(m) + ")");
  }

  Solution sol;
  sol.trace.push_back({0, "lemma1", d, h, m, "", {}, {},
                       "bisect all masses, then solve (d, h-1, 2m)"});

  Solution cut = ham_sandwich(masses, config);
  sol.evaluations += cut.evaluations;
  append_nested(sol.trace, cut.trace);
  if (!cut.converged) {
    sol.trace.front().note += "; bisecting step did not converge";
    sol.report = failed_report(m, config);
    return sol;
  }
  const Hyperplane& first = (*cut.arrangement)[0];

  const double tau = config.tau.value_or(default_tau(masses));
  const SplitMode mode = config.tol == 0.0 ? SplitMode::Exact : SplitMode::Tolerant;
  std::vector<Mass> halves;
  halves.reserve(2 * m);
  for (const auto& mass : masses) {
    auto [plus, minus] = split_mass(mass, first, tau, mode);
    halves.push_back(std::move(plus));
    halves.push_back(std::move(minus));
  }
  sol.trace.push_back({1, "split", d, h - 1, halves.size(), "", {}, {},
                       "masses split by the bisecting plane"});

  SolverConfig inner_config = config;
  inner_config.seed = derive_seed(config.seed, 1);
  inner_config.tau = tau;
  Solution sub = inner.solve(halves, h - 1, inner_config);
  sol.evaluations += sub.evaluations;
  append_nested(sol.trace, sub.trace);
  if (!sub.arrangement) {
    sol.report = failed_report(m, config);
    return sol;
  }

  std::vector<Hyperplane> planes{first};
  for (const auto& p : sub.arrangement->planes()) planes.push_back(p);
  sol.arrangement = Arrangement(std::move(planes));
  sol.report = verify_with(masses, *sol.arrangement, config);
  sol.converged = sol.report.pass;
  sol.trace.front().metrics["max_imbalance"] = sol.report.max_imbalance;
  return sol;
}

Solution reduce_lemma2(std::span<const Mass> masses, std::size_t h, const SolverConfig& config,
                       const Lemma2Options& options, const Strategy& inner) {
  options.schedule.validate();
  if (options.ball_n == 0) throw InvalidArgument("lemma2: ball_n must be positive");
  if (h == 0) throw InvalidArgument("lemma2: h must be positive");
  const std::size_t d = common_dim(masses);
  const std::size_t m = masses.size();
  double diag = bounding_box_diagonal(masses);
  if (!(diag > 0.0)) diag = 1.0;

  Solution sol;
  sol.report = failed_report(m, config);
  sol.trace.push_back({0, "lemma2", d, h, m, "eps", options.schedule.values, {},
                       "lift to (d+1, h, m+1) with a ball at e_{d+1}, restrict back; "
                       "stopping rule is heuristic"});

  Point center(d + 1, 0.0);
  center[d] = 1.0;
  const Mass ball = ball_mass(center, 0.5, options.ball_n, derive_seed(config.seed, 0xba11));

  SolverConfig lifted_config = config;
  lifted_config.tol = std::max(config.tol, 3.0 / std::sqrt(static_cast<double>(options.ball_n)));
  lifted_config.boundary_budget = std::max(config.boundary_budget, 1e-3);
  lifted_config.tau.reset();

  std::optional<std::tuple<bool, double, double>> best_key;
  for (std::size_t stage = 0; stage < options.schedule.values.size(); ++stage) {
    const double eps = options.schedule.values[stage];
    std::vector<Mass> lifted;
    lifted.reserve(m + 1);
    for (const auto& mass : masses) lifted.push_back(thicken_mass(mass, eps * diag));
    lifted.push_back(ball);

    TraceStep step{1, "lemma2-stage", d + 1, h, lifted.size(), "eps", {eps}, {}, ""};
    lifted_config.seed = derive_seed(config.seed, 100 + stage);
    Solution sub = inner.solve(lifted, h, lifted_config);
    sol.evaluations += sub.evaluations;

    if (!sub.arrangement) {
      step.note = "lifted solve produced no arrangement";
      sol.trace.push_back(std::move(step));
      append_nested(sol.trace, sub.trace);
      continue;
    }
    step.metrics["lifted_imbalance"] = sub.report.max_imbalance;
    step.metrics["lifted_pass"] = sub.report.pass ? 1.0 : 0.0;
    double center_distance = 0.0;
    for (const auto& p : sub.arrangement->planes()) {
      center_distance = std::max(center_distance, std::abs(p.signed_distance(center)));
    }
    step.metrics["ball_center_distance"] = center_distance;

    std::optional<Arrangement> restricted;
    try {
      restricted = restrict_arrangement(*sub.arrangement);
    } catch (const DegenerateRestriction&) {
      step.note = "skipped: a lifted plane is parallel to the base slice";
    }
    if (restricted) {
      const VerificationReport rep = verify_with(masses, *restricted, config);
      step.metrics["restricted_imbalance"] = rep.max_imbalance;
      step.metrics["restricted_pass"] = rep.pass ? 1.0 : 0.0;
      step.note = "eps=" + fmt_double(eps) + (rep.pass ? " verified" : " not verified");
      // Later (thinner) stages win ties.
      const auto key = std::tuple(!rep.pass, rep.max_imbalance, rep.boundary_fraction);
      if (!best_key || !(*best_key < key)) {
        best_key = key;
        sol.arrangement = std::move(restricted);
        sol.report = rep;
        sol.converged = rep.pass;
      }
    }
    sol.trace.push_back(std::move(step));
    append_nested(sol.trace, sub.trace);
    if (sol.converged && options.stop_on_pass) break;
  }
  sol.trace.front().metrics["max_imbalance"] = sol.report.max_imbalance;
  return sol;
}

std::optional<StrategyKind> parse_strategy(std::string_view name) {
  if (name == "direct") return StrategyKind::Direct;
  if (name == "lemma1") return StrategyKind::Lemma1;
  if (name == "lemma2") return StrategyKind::Lemma2;
  if (name == "auto") return StrategyKind::Auto;
  return std::nullopt;
}

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::Direct: return "direct";
    case StrategyKind::Lemma1: return "lemma1";
    case StrategyKind::Lemma2: return "lemma2";
    case StrategyKind::Auto: return "auto";
  }
  return "?";
}

Solution solve(std::span<const Mass> masses, std::size_t h, StrategyKind kind,
               const SolverConfig& config, const Lemma2Options& lemma2) {
  switch (kind) {
    case StrategyKind::Direct: return solve_direct(masses, h, config);
    case StrategyKind::Lemma1: return reduce_lemma1(masses, h, config, *auto_strategy());
    case StrategyKind::Lemma2: return reduce_lemma2(masses, h, config, lemma2, *auto_strategy());
    case StrategyKind::Auto: return auto_strategy()->solve(masses, h, config);
  }
  throw InvalidArgument("solve: unknown strategy");
}

}  // namespace masscut
