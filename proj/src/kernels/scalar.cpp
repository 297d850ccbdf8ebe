#include <cmath>

#include "kernels_impl.hpp"

namespace masscut::kernels::scalar {

void signed_distance(const double* cols, std::size_t n, std::size_t dim,
                     const double* normal, double offset, double* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = -offset;
  for (std::size_t k = 0; k < dim; ++k) {
    const double a = normal[k];
    const double* col = cols + k * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += a * col[i];
  }
}

void logistic(const double* in, std::size_t n, double scale, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = 1.0 / (1.0 + std::exp(-scale * in[i]));
  }
}

void soft_orthant_mass(const double* probs, const double* weights,
                       std::size_t n, std::size_t h, double* out) {
  const std::size_t codes = std::size_t{1} << h;
  for (std::size_t s = 0; s < codes; ++s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double prod = weights[i];
      for (std::size_t p = 0; p < h; ++p) {
        const double q = probs[p * n + i];
        prod *= ((s >> p) & 1U) ? q : 1.0 - q;
      }
      acc += prod;
    }
    out[s] = acc;
  }
}

void classify(const double* dist, std::size_t n, std::size_t h, double tau,
              std::int32_t* codes) {
  for (std::size_t i = 0; i < n; ++i) codes[i] = 0;
  for (std::size_t p = 0; p < h; ++p) {
    const double* row = dist + p * n;
    const std::int32_t bit = std::int32_t{1} << p;
    for (std::size_t i = 0; i < n; ++i) {
      if (codes[i] == kBoundaryCode) continue;
      if (std::abs(row[i]) <= tau) {
        codes[i] = kBoundaryCode;
      } else if (row[i] > 0.0) {
        codes[i] |= bit;
      }
    }
  }
}

}  // namespace masscut::kernels::scalar
