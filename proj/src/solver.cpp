#include "masscut/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <tuple>

#include "masscut/errors.hpp"
#include "masscut/kernels.hpp"
#include "masscut/nelder_mead.hpp"
#include "masscut/rng.hpp"
#include "parallel.hpp"

namespace masscut {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Evaluates the smoothed objective with reusable scratch buffers. One
// instance per worker thread.
class SmoothedEvaluator {
 public:
  SmoothedEvaluator(std::span<const Mass> masses, std::size_t h, std::size_t dim,
                    bool normalized)
      : masses_(masses), h_(h), dim_(dim), normalized_(normalized) {
    std::size_t n_max = 0;
    for (const auto& m : masses_) n_max = std::max(n_max, m.size());
    dist_.resize(h * n_max);
    probs_.resize(h * n_max);
    soft_.resize(std::size_t{1} << h);
    normals_.resize(h * dim);
    offsets_.resize(h);
  }

  /// nullopt when some plane has a zero normal.
  std::optional<double> operator()(std::span<const double> params, double beta_abs) {
    if (!load(params)) return std::nullopt;
    const auto& k = kernels::active();
    const double inv_beta = 1.0 / beta_abs;
    const double cells = static_cast<double>(soft_.size());
    double sum = 0.0;
    for (const auto& m : masses_) {
      const std::size_t n = m.size();
      for (std::size_t p = 0; p < h_; ++p) {
        k.signed_distance(m.columns().data(), n, dim_, normals_.data() + p * dim_,
                          offsets_[p], dist_.data() + p * n);
      }
      k.logistic(dist_.data(), h_ * n, inv_beta, probs_.data());
      k.soft_orthant_mass(probs_.data(), m.weights().data(), n, h_, soft_.data());
      const double target = m.total() / cells;
      const double scale = normalized_ ? 1.0 / m.total() : 1.0;
      for (double v : soft_) {
        const double dev = (v - target) * scale;
        sum += dev * dev;
      }
    }
    return sum;
  }

 private:
  bool load(std::span<const double> params) {
    if (params.size() != h_ * (dim_ + 1)) {
      throw DimensionMismatch("smoothed_objective: expected h * (d + 1) parameters");
    }
    for (std::size_t p = 0; p < h_; ++p) {
      const double* block = params.data() + p * (dim_ + 1);
      double norm2 = 0.0;
      for (std::size_t c = 0; c < dim_; ++c) norm2 += block[c] * block[c];
      const double norm = std::sqrt(norm2);
      if (!(norm > 0.0) || !std::isfinite(norm)) return false;
      for (std::size_t c = 0; c < dim_; ++c) normals_[p * dim_ + c] = block[c] / norm;
      offsets_[p] = block[dim_] / norm;
    }
    return true;
  }

  std::span<const Mass> masses_;
  std::size_t h_;
  std::size_t dim_;
  bool normalized_;
  std::vector<double> dist_, probs_, soft_, normals_, offsets_;
};

double positive_diagonal(std::span<const Mass> masses) {
  const double diag = bounding_box_diagonal(masses);
  return diag > 0.0 ? diag : 1.0;
}

std::vector<Hyperplane> planes_from_params(std::span<const double> params, std::size_t h,
                                           std::size_t dim) {
  std::vector<Hyperplane> planes;
  planes.reserve(h);
  for (std::size_t p = 0; p < h; ++p) {
    const double* block = params.data() + p * (dim + 1);
    planes.push_back(Hyperplane::normalized({block, block + dim}, block[dim]));
  }
  return planes;
}

std::vector<double> params_from_planes(const std::vector<Hyperplane>& planes) {
  std::vector<double> params;
  for (const auto& pl : planes) {
    params.insert(params.end(), pl.normal().begin(), pl.normal().end());
    params.push_back(pl.offset());
  }
  return params;
}

// Lexicographic quality of a candidate: passing first, then true imbalance,
// then boundary weight.
struct Score {
  bool pass = false;
  double imbalance = kInf;
  double boundary = kInf;

  bool perfect() const { return pass && imbalance == 0.0 && boundary == 0.0; }
  friend bool operator<(const Score& a, const Score& b) {
    return std::tuple(!a.pass, a.imbalance, a.boundary) <
           std::tuple(!b.pass, b.imbalance, b.boundary);
  }
};

struct Problem {
  std::span<const Mass> masses;
  std::size_t h;
  std::size_t dim;
  double diag;
  double tau;
  const SolverConfig* config;

  Score score(const std::vector<Hyperplane>& planes) const {
    const auto r = verify(masses, Arrangement(planes), config->tol, config->boundary_budget, tau);
    return {r.pass, r.max_imbalance, r.boundary_fraction};
  }
};

// Best offset for plane `which` with every other plane and its normal held
// fixed: sweeps the offset across the sorted projections of all points,
// trying the midpoint of every gap. Ties go to the offset closest to the
// current one.
double snap_offset(const Problem& pb, const std::vector<Hyperplane>& planes, std::size_t which) {
  const auto& k = kernels::active();
  const std::size_t h = pb.h;
  const std::size_t cells = std::size_t{1} << h;
  const std::uint32_t bit = 1U << which;
  const auto& normal = planes[which].normal();

  struct Entry {
    double proj;
    std::size_t mass;
    double weight;
    std::uint32_t code;
  };
  std::vector<Entry> entries;
  std::vector<std::vector<double>> table(pb.masses.size(), std::vector<double>(cells, 0.0));
  std::vector<double> boundary(pb.masses.size(), 0.0);

  std::vector<double> dist, proj;
  std::vector<std::int32_t> codes;
  for (std::size_t j = 0; j < pb.masses.size(); ++j) {
    const Mass& m = pb.masses[j];
    const std::size_t n = m.size();
    dist.assign(h * n, 0.0);
    for (std::size_t p = 0; p < h; ++p) {
      if (p == which) {
        std::fill_n(dist.begin() + static_cast<std::ptrdiff_t>(p * n), n, kInf);
      } else {
        k.signed_distance(m.columns().data(), n, pb.dim, planes[p].normal().data(),
                          planes[p].offset(), dist.data() + p * n);
      }
    }
    codes.resize(n);
    k.classify(dist.data(), n, h, pb.tau, codes.data());
    proj.resize(n);
    k.signed_distance(m.columns().data(), n, pb.dim, normal.data(), 0.0, proj.data());
    for (std::size_t i = 0; i < n; ++i) {
      if (codes[i] == kernels::kBoundaryCode) {
        boundary[j] += m.weight(i);
        continue;
      }
      const auto c = static_cast<std::uint32_t>(codes[i]);
      table[j][c] += m.weight(i);
      entries.push_back({proj[i], j, m.weight(i), c});
    }
  }
  if (entries.empty()) return planes[which].offset();
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.proj < b.proj; });

  auto mass_imbalance = [&](std::size_t j) {
    const double total = pb.masses[j].total();
    const double target = (total - boundary[j]) / static_cast<double>(cells);
    double worst = 0.0;
    for (double e : table[j]) worst = std::max(worst, std::abs(e - target));
    return worst / total;
  };
  std::vector<double> imb(pb.masses.size());
  for (std::size_t j = 0; j < imb.size(); ++j) imb[j] = mass_imbalance(j);
  auto worst_mass = [&] { return *std::max_element(imb.begin(), imb.end()); };

  const double current = planes[which].offset();
  const double margin = 1e-3 * pb.diag;
  double best_offset = entries.front().proj - margin;
  double best_value = worst_mass();
  auto consider = [&](double offset) {
    const double v = worst_mass();
    if (v < best_value ||
        (v == best_value && std::abs(offset - current) < std::abs(best_offset - current))) {
      best_value = v;
      best_offset = offset;
    }
  };

  for (std::size_t idx = 0; idx < entries.size();) {
    const double p = entries[idx].proj;
    std::size_t end = idx;
    while (end < entries.size() && entries[end].proj == p) {
      const Entry& e = entries[end];
      table[e.mass][e.code] -= e.weight;
      table[e.mass][e.code ^ bit] += e.weight;
      imb[e.mass] = mass_imbalance(e.mass);
      ++end;
    }
    const double next = end < entries.size() ? entries[end].proj : p + 2.0 * margin;
    consider(0.5 * (p + next));
    idx = end;
  }
  return best_offset;
}

// Coordinate-wise offset snapping; keeps a change only when the verified
// score improves.
void snap_all(const Problem& pb, std::vector<Hyperplane>& planes, Score& score) {
  for (int sweep = 0; sweep < 3; ++sweep) {
    bool improved = false;
    for (std::size_t p = 0; p < pb.h && !score.perfect(); ++p) {
      const double offset = snap_offset(pb, planes, p);
      if (offset == planes[p].offset()) continue;
      auto trial = planes;
      trial[p] = Hyperplane(planes[p].normal(), offset);
      const Score s = pb.score(trial);
      if (s < score) {
        planes = std::move(trial);
        score = s;
        improved = true;
      }
    }
    if (!improved || score.perfect()) return;
  }
}

// Single plane only: minimizes over directions the overlap deficit of the
// per-mass median gaps, max_j lo_j - min_j hi_j. A negative deficit means
// one offset splits every mass exactly. Unlike the orthant counts this is
// continuous in the normal, so it finishes what the smoothed search leaves
// one point short.
void polish_single_plane(const Problem& pb, std::vector<Hyperplane>& planes, Score& score, Rng& rng) {
  if (pb.h != 1 || score.perfect()) return;
  const auto& k = kernels::active();
  std::vector<double> proj;
  std::vector<std::size_t> order;

  struct Gap {
    double lo, hi;
  };
  auto gaps = [&](std::span<const double> normal) {
    Gap g{-kInf, kInf};
    for (const Mass& m : pb.masses) {
      const std::size_t n = m.size();
      proj.resize(n);
      k.signed_distance(m.columns().data(), n, pb.dim, normal.data(), 0.0, proj.data());
      order.resize(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
      const double half = 0.5 * m.total();
      double cum = 0.0;
      std::size_t idx = 0;
      while (idx + 1 < n && cum + m.weight(order[idx]) < half) cum += m.weight(order[idx++]);
      cum += m.weight(order[idx]);
      const double lo = proj[order[idx]];
      const double hi = (cum == half && idx + 1 < n) ? proj[order[idx + 1]] : lo;
      g.lo = std::max(g.lo, lo);
      g.hi = std::min(g.hi, hi);
    }
    return g;
  };
  auto unit = [](std::vector<double> v) {
    double norm = 0.0;
    for (double c : v) norm += c * c;
    norm = std::sqrt(norm);
    if (!(norm > 0.0)) return std::optional<std::vector<double>>{};
    for (double& c : v) c /= norm;
    return std::optional<std::vector<double>>{std::move(v)};
  };
  auto deficit = [&](const std::vector<double>& v) {
    const auto n = unit(v);
    if (!n) return kInf;
    const Gap g = gaps(*n);
    return 1.0 + (g.lo - g.hi) / pb.diag;
  };

  // the deficit has local minima a few hundredths of a radian wide, so
  // look around before descending
  std::vector<double> x(planes[0].normal());
  double best = deficit(x);
  const std::vector<double> center(x);
  for (int i = 0; i < 96 && best >= 1.0; ++i) {
    const double radius = i % 3 == 0 ? 0.3 : (i % 3 == 1 ? 0.1 : 0.03);
    std::vector<double> v(center);
    for (double& c : v) c += radius * rng.normal();
    const double f = deficit(v);
    if (f < best) {
      best = f;
      x = std::move(v);
    }
  }
  double step = 0.02;
  for (int round = 0; round < 6; ++round, step *= 0.2) {
    NelderMeadOptions opts;
    opts.max_evals = pb.config->max_evals;
    opts.f_tol = 0.0;
    opts.x_tol = 1e-3 * step;
    const auto res = nelder_mead(deficit, x, std::vector<double>(x.size(), step), opts);
    x = res.x;
    if (res.value < 1.0) break;
  }
  const auto n = unit(x);
  if (!n) return;
  const Gap g = gaps(*n);
  if (!(g.lo < g.hi)) return;
  std::vector<Hyperplane> trial{Hyperplane(*n, 0.5 * (g.lo + g.hi))};
  const Score s = pb.score(trial);
  if (s < score) {
    planes = std::move(trial);
    score = s;
  }
}

struct RestartResult {
  std::vector<double> params;
  Score score;
  std::size_t evals = 0;
  bool ran = false;
};

RestartResult run_restart(const Problem& pb, std::size_t index) {
  const SolverConfig& cfg = *pb.config;
  Rng rng(derive_seed(cfg.seed, index));
  const std::size_t block = pb.dim + 1;

  std::vector<double> x(pb.h * block);
  for (std::size_t p = 0; p < pb.h; ++p) {
    const auto normal = rng.unit_vector(pb.dim);
    double lo = kInf, hi = -kInf;
    for (const auto& m : pb.masses) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        double v = 0.0;
        for (std::size_t c = 0; c < pb.dim; ++c) v += normal[c] * m.coord(i, c);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    std::copy(normal.begin(), normal.end(), x.begin() + static_cast<std::ptrdiff_t>(p * block));
    x[p * block + pb.dim] = rng.uniform(lo, hi);
  }

  RestartResult out;
  out.ran = true;
  auto incumbent = planes_from_params(x, pb.h, pb.dim);
  out.score = pb.score(incumbent);

  SmoothedEvaluator objective(pb.masses, pb.h, pb.dim, /*normalized=*/true);
  for (double beta : cfg.smoothing_schedule) {
    if (out.score.perfect()) break;
    const double beta_abs = beta * pb.diag;
    const double rel_step = std::max(2.0 * beta, 0.005);
    std::vector<double> step(x.size());
    for (std::size_t p = 0; p < pb.h; ++p) {
      for (std::size_t c = 0; c < pb.dim; ++c) step[p * block + c] = rel_step;
      step[p * block + pb.dim] = rel_step * pb.diag;
    }
    NelderMeadOptions opts;
    opts.max_evals = cfg.max_evals;
    opts.f_tol = 1e-10;
    opts.x_tol = 1e-3 * rel_step * std::max(1.0, pb.diag);
    const auto res = nelder_mead(
        [&](const std::vector<double>& v) { return objective(v, beta_abs).value_or(kInf); },
        x, step, opts);
    out.evals += res.evals;
    if (!std::isfinite(res.value)) continue;
    x = res.x;
    auto planes = planes_from_params(x, pb.h, pb.dim);
    const Score s = pb.score(planes);
    if (s < out.score) {
      out.score = s;
      incumbent = std::move(planes);
    }
  }
  snap_all(pb, incumbent, out.score);
  polish_single_plane(pb, incumbent, out.score, rng);
  out.params = params_from_planes(incumbent);
  return out;
}

std::string describe_config(const SolverConfig& cfg) {
  return "restarts=" + std::to_string(cfg.restarts) +
         " max_evals=" + std::to_string(cfg.max_evals);
}

}  // namespace

void SolverConfig::validate() const {
  if (restarts == 0) throw InvalidArgument("solver config: restarts must be positive");
  if (max_evals == 0) throw InvalidArgument("solver config: max_evals must be positive");
  if (smoothing_schedule.empty()) throw InvalidArgument("solver config: empty smoothing schedule");
  for (std::size_t i = 0; i < smoothing_schedule.size(); ++i) {
    if (!(smoothing_schedule[i] > 0.0)) {
      throw InvalidArgument("solver config: smoothing widths must be positive");
    }
    if (i > 0 && !(smoothing_schedule[i] < smoothing_schedule[i - 1])) {
      throw InvalidArgument("solver config: smoothing schedule must be strictly decreasing");
    }
  }
  if (tol < 0.0 || boundary_budget < 0.0) {
    throw InvalidArgument("solver config: tolerances must be nonnegative");
  }
  if (tau && *tau < 0.0) throw InvalidArgument("solver config: tau must be nonnegative");
}

std::size_t worker_count(const SolverConfig& config) {
  if (config.threads > 0) return config.threads;
  if (const char* env = std::getenv("MASSCUT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

VerificationReport verify_with(std::span<const Mass> masses, const Arrangement& arrangement,
                               const SolverConfig& config) {
  return verify(masses, arrangement, config.tol, config.boundary_budget,
                config.tau.value_or(default_tau(masses)));
}

double smoothed_objective(std::span<const Mass> masses, std::span<const double> params,
                          std::size_t h, double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("smoothed_objective: beta must be positive");
  if (h == 0) throw InvalidArgument("smoothed_objective: h must be positive");
  const std::size_t d = common_dim(masses);
  SmoothedEvaluator eval(masses, h, d, /*normalized=*/false);
  const auto v = eval(params, beta * positive_diagonal(masses));
  if (!v) throw InvalidArgument("smoothed_objective: zero normal");
  return *v;
}

Solution solve_direct(std::span<const Mass> masses, std::size_t h, const SolverConfig& config) {
  config.validate();
  if (h == 0) throw InvalidArgument("solve_direct: h must be positive");
  if (h > 16) throw InvalidArgument("solve_direct: h must be at most 16");
  const std::size_t d = common_dim(masses);

  const Problem pb{masses, h, d, positive_diagonal(masses),
                   config.tau.value_or(default_tau(masses)), &config};

  std::vector<RestartResult> results(config.restarts);
  // A restart with a perfect score can only be beaten by a lower index, so
  // higher indices are skipped once one is found. The winner does not
  // depend on scheduling.
  std::atomic<std::size_t> first_perfect{config.restarts};
  detail::parallel_for(config.restarts, std::min(worker_count(config), config.restarts),
                       [&](std::size_t r) {
                         if (r > first_perfect.load()) return;
                         results[r] = run_restart(pb, r);
                         if (results[r].score.perfect()) {
                           std::size_t cur = first_perfect.load();
                           while (r < cur && !first_perfect.compare_exchange_weak(cur, r)) {
                           }
                         }
                       });

  std::size_t best = config.restarts;
  std::size_t evals = 0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    if (!results[r].ran) continue;
    evals += results[r].evals;
    if (best == config.restarts || results[r].score < results[best].score) best = r;
  }

  Solution sol;
  sol.evaluations = evals;
  sol.arrangement = Arrangement(planes_from_params(results[best].params, h, d));
  sol.report = verify_with(masses, *sol.arrangement, config);
  sol.converged = sol.report.pass;
  sol.trace.push_back({0, "direct", d, h, masses.size(), "beta", config.smoothing_schedule,
                       {{"max_imbalance", sol.report.max_imbalance}},
                       describe_config(config) + " best_restart=" + std::to_string(best)});
  return sol;
}

Solution ham_sandwich(std::span<const Mass> masses, const SolverConfig& config) {
  const std::size_t d = common_dim(masses);
  SolverConfig cfg = config;
  if (cfg.smoothing_schedule == SolverConfig::default_schedule()) {
    cfg.smoothing_schedule = SolverConfig::ham_sandwich_schedule();
  }
  Solution sol = solve_direct(masses, 1, cfg);
  sol.trace.front().strategy = "ham_sandwich";
  if (d < masses.size()) {
    sol.trace.front().note += " warning=PreconditionOutsideGuarantee(d<m)";
  }
  return sol;
}

}  // namespace masscut
