#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace masscut {

struct NelderMeadOptions {
  std::size_t max_evals = 2000;
  /// Stop when the spread of simplex values and the simplex extent both
  /// fall below these.
  double f_tol = 1e-12;
  double x_tol = 1e-10;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evals = 0;
};

/// Downhill simplex minimization from `start` with an axis-aligned initial
/// simplex of per-coordinate size `step`.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const std::vector<double>& step,
                             const NelderMeadOptions& options);

}  // namespace masscut
