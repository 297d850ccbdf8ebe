#pragma once

// Randomized invariant checks shared by the unit tests and the acceptance
// runner. Each check returns how many cases ran and the first failure.

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "masscut/geometry.hpp"
#include "masscut/instances.hpp"
#include "masscut/rng.hpp"
#include "masscut/solver.hpp"
#include "masscut/verifier.hpp"

namespace masscut::props {

struct Outcome {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0; }
  void fail(std::size_t i, const std::string& what) {
    if (failures++ == 0) first_failure = "case " + std::to_string(i) + ": " + what;
  }
};

inline Mass random_mass(Rng& rng, std::size_t dim, std::size_t n, bool weighted) {
  std::vector<Point> pts(n, Point(dim));
  std::vector<double> w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : pts[i]) x = 2.0 * rng.normal();
    if (weighted) w[i] = rng.uniform(0.1, 3.0);
  }
  return Mass(dim, std::move(pts), std::move(w));
}

inline Hyperplane random_plane(Rng& rng, std::size_t dim) {
  return Hyperplane(rng.unit_vector(dim), rng.uniform(-1.0, 1.0));
}

inline Arrangement random_arrangement(Rng& rng, std::size_t dim, std::size_t h) {
  std::vector<Hyperplane> planes;
  for (std::size_t k = 0; k < h; ++k) planes.push_back(random_plane(rng, dim));
  return Arrangement(std::move(planes));
}

inline bool close(double a, double b, double rel = 1e-12) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

// Orthant entries plus boundary add up to the total.
inline Outcome conservation(std::uint64_t seed, std::size_t cases = 200) {
  Outcome o;
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i, ++o.cases) {
    const std::size_t dim = 1 + i % 4, h = 1 + i % 5;
    const Mass m = random_mass(rng, dim, 20 + i % 50, i % 2 == 0);
    const auto arr = random_arrangement(rng, dim, h);
    // a large tau on some cases puts weight on the boundary
    const double tau = i % 3 == 0 ? 0.3 : default_tau(std::vector<Mass>{m});
    const auto t = orthant_measures(m, arr, tau);
    double sum = t.boundary;
    for (double e : t.entries) sum += e;
    if (t.entries.size() != (std::size_t{1} << h)) o.fail(i, "table has the wrong size");
    if (!close(sum, m.total())) o.fail(i, "sum " + std::to_string(sum) + " != total " + std::to_string(m.total()));
  }
  return o;
}

// Flipping plane k swaps orthants whose codes differ in bit k.
inline Outcome sign_flip(std::uint64_t seed, std::size_t cases = 200) {
  Outcome o;
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i, ++o.cases) {
    const std::size_t dim = 1 + i % 3, h = 1 + i % 4;
    const Mass m = random_mass(rng, dim, 30, true);
    const auto arr = random_arrangement(rng, dim, h);
    const std::size_t k = i % h;
    std::vector<Hyperplane> planes(arr.planes().begin(), arr.planes().end());
    planes[k] = planes[k].flipped();
    const double tau = default_tau(std::vector<Mass>{m});
    const auto a = orthant_measures(m, arr, tau);
    const auto b = orthant_measures(m, Arrangement(planes), tau);
    for (std::size_t c = 0; c < a.entries.size(); ++c) {
      if (a.entries[c] != b.entries[c ^ (std::size_t{1} << k)]) {
        o.fail(i, "orthant " + std::to_string(c) + " not permuted");
        break;
      }
    }
    if (a.boundary != b.boundary) o.fail(i, "boundary changed");
  }
  return o;
}

// restrict(lift(P)) == P; lifting and restricting keep sides.
inline Outcome lift_restrict(std::uint64_t seed, std::size_t cases = 200) {
  Outcome o;
  Rng rng(seed);
  auto same = [](const Hyperplane& a, const Hyperplane& b) {
    if (a.dim() != b.dim() || !close(a.offset(), b.offset(), 1e-10)) return false;
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (!close(a.normal()[i], b.normal()[i], 1e-10)) return false;
    }
    return true;
  };
  for (std::size_t i = 0; i < cases; ++i, ++o.cases) {
    const std::size_t dim = 1 + i % 5;
    const Hyperplane p = random_plane(rng, dim);
    if (!same(restrict_hyperplane(lift_hyperplane(p)), p)) o.fail(i, "restrict(lift(P)) != P");

    // lift is a pre-image: the extra coordinate never matters
    Point x(dim);
    for (auto& v : x) v = 3.0 * rng.normal();
    Point xt(x);
    xt.push_back(rng.uniform(-10.0, 10.0));
    if (side_of(xt, lift_hyperplane(p), 1e-9) != side_of(x, p, 1e-9)) o.fail(i, "lift changed a side");

    // restriction agrees with the plane on the base slice
    auto n = rng.unit_vector(dim + 1);
    double base = 0.0;
    for (std::size_t j = 0; j < dim; ++j) base += n[j] * n[j];
    if (std::sqrt(base) < 1e-3) continue;
    const Hyperplane q(n, rng.uniform(-1.0, 1.0));
    Point x0(x);
    x0.push_back(0.0);
    if (side_of(x0, q, 1e-9) != side_of(x, restrict_hyperplane(q), 1e-9)) o.fail(i, "restriction changed a side");
  }
  return o;
}

// Random orthogonal matrix from Gram-Schmidt on gaussian columns.
inline std::vector<std::vector<double>> random_rotation(Rng& rng, std::size_t dim) {
  std::vector<std::vector<double>> q;
  while (q.size() < dim) {
    std::vector<double> v(dim);
    for (auto& x : v) x = rng.normal();
    for (const auto& u : q) {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += u[i] * v[i];
      for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * u[i];
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm < 1e-6) continue;
    for (auto& x : v) x /= norm;
    q.push_back(std::move(v));
  }
  return q;
}

inline std::vector<double> rotate(const std::vector<std::vector<double>>& r, std::span<const double> x) {
  std::vector<double> y(r.size(), 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += r[i][j] * x[j];
  }
  return y;
}

// Moving masses and planes together by x -> Rx + t leaves the report alone;
// so does scaling all weights of a mass.
inline Outcome rigid_motion(std::uint64_t seed, std::size_t cases = 200) {
  Outcome o;
  Rng rng(seed);
  const double tau = 1e-9;
  for (std::size_t i = 0; i < cases; ++i, ++o.cases) {
    const std::size_t dim = 1 + i % 4, h = 1 + i % 3;
    const std::vector<Mass> masses{random_mass(rng, dim, 40, true), random_mass(rng, dim, 25, false)};
    const auto arr = random_arrangement(rng, dim, h);
    const auto r = random_rotation(rng, dim);
    std::vector<double> t(dim);
    for (auto& x : t) x = rng.uniform(-5.0, 5.0);

    std::vector<Mass> moved;
    for (const auto& m : masses) {
      std::vector<Point> pts;
      for (std::size_t p = 0; p < m.size(); ++p) {
        auto y = rotate(r, m.point(p));
        for (std::size_t j = 0; j < dim; ++j) y[j] += t[j];
        pts.push_back(std::move(y));
      }
      moved.emplace_back(dim, std::move(pts), std::vector<double>(m.weights().begin(), m.weights().end()));
    }
    std::vector<Hyperplane> planes;
    for (const auto& p : arr.planes()) {
      auto n = rotate(r, p.normal());
      double off = p.offset();
      for (std::size_t j = 0; j < dim; ++j) off += n[j] * t[j];
      planes.push_back(Hyperplane::normalized(std::move(n), off));
    }
    const auto a = verify(masses, arr, 0.1, 0.1, tau);
    const auto b = verify(moved, Arrangement(planes), 0.1, 0.1, tau);
    for (std::size_t j = 0; j < masses.size(); ++j) {
      if (!close(a.per_mass_imbalance[j], b.per_mass_imbalance[j], 1e-9)) o.fail(i, "rigid motion changed imbalance");
    }

    const double c = rng.uniform(0.01, 100.0);
    const std::vector<Mass> scaled{masses[0].scaled(c), masses[1].scaled(1.0 / c)};
    const auto s = verify(scaled, arr, 0.1, 0.1, tau);
    for (std::size_t j = 0; j < masses.size(); ++j) {
      if (!close(a.per_mass_imbalance[j], s.per_mass_imbalance[j], 1e-9)) o.fail(i, "weight scaling changed imbalance");
    }
    if (!close(a.boundary_fraction, s.boundary_fraction, 1e-9)) o.fail(i, "weight scaling changed boundary");
  }
  return o;
}

// Serialize, parse, serialize gives the same values and the same bytes.
inline Outcome file_round_trip(std::uint64_t seed, std::size_t cases = 200) {
  Outcome o;
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i, ++o.cases) {
    const std::size_t dim = 1 + i % 4;
    InstanceFile inst{dim, {}, {{"case", i}}};
    for (std::size_t j = 0; j < 1 + i % 3; ++j) inst.masses.push_back(random_mass(rng, dim, 1 + i % 17, true));
    const auto text = instance_to_json(inst);
    const auto back = instance_from_json(text);
    if (!(back == inst)) o.fail(i, "instance values changed");
    if (instance_to_json(back) != text) o.fail(i, "instance bytes changed");

    const auto arr = random_arrangement(rng, dim, 1 + i % 4);
    const auto cuts = cuts_to_json(arr);
    if (!(cuts_from_json(cuts) == arr)) o.fail(i, "cuts values changed");
  }
  return o;
}

// Same seed and config, same arrangement, whatever the thread count.
inline Outcome solver_determinism(std::uint64_t seed, std::size_t cases = 200) {
  Outcome o;
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i, ++o.cases) {
    const std::size_t dim = 1 + i % 3, h = 1 + i % 2;
    const std::vector<Mass> masses{random_mass(rng, dim, 12, i % 2 == 1)};
    SolverConfig c;
    c.seed = rng.next();
    c.restarts = 3;
    c.max_evals = 150;
    c.tol = 0.05;
    c.boundary_budget = 0.05;
    c.threads = 1;
    const auto a = solve_direct(masses, h, c);
    c.threads = 3;
    const auto b = solve_direct(masses, h, c);
    const auto again = solve_direct(masses, h, c);
    if (!a.arrangement || !b.arrangement || !again.arrangement) {
      o.fail(i, "no arrangement");
      continue;
    }
    if (!(*a.arrangement == *b.arrangement) || !(*b.arrangement == *again.arrangement)) {
      o.fail(i, "arrangements differ");
    }
    if (a.report.max_imbalance != b.report.max_imbalance) o.fail(i, "reports differ");
  }
  return o;
}

}  // namespace masscut::props
