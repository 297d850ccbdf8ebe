#include "masscut/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "masscut/errors.hpp"

namespace masscut {

double imbalance(const MeasureTable& table) {
  if (!(table.total > 0.0)) throw InvalidArgument("imbalance: total must be positive");
  const double target =
      (table.total - table.boundary) / static_cast<double>(std::size_t{1} << table.h);
  double worst = 0.0;
  for (double e : table.entries) worst = std::max(worst, std::abs(e - target));
  return worst / table.total;
}

VerificationReport verify(std::span<const Mass> masses, const Arrangement& arrangement,
                          double tol, double boundary_budget, double tau) {
  if (tol < 0.0 || boundary_budget < 0.0) {
    throw InvalidArgument("verify: tolerances must be nonnegative");
  }
  VerificationReport r;
  r.tol = tol;
  r.boundary_budget = boundary_budget;
  r.per_mass_imbalance.reserve(masses.size());
  for (const auto& m : masses) {
    const MeasureTable t = orthant_measures(m, arrangement, tau);
    const double imb = imbalance(t);
    r.per_mass_imbalance.push_back(imb);
    r.max_imbalance = std::max(r.max_imbalance, imb);
    r.boundary_fraction = std::max(r.boundary_fraction, t.boundary / t.total);
  }
  r.pass = r.max_imbalance <= tol && r.boundary_fraction <= boundary_budget;
  return r;
}

VerificationReport verify(std::span<const Mass> masses, const Arrangement& arrangement,
                          Tolerances tolerances) {
  return verify(masses, arrangement, tolerances.tol, tolerances.boundary_budget,
                default_tau(masses));
}

}  // namespace masscut
