#pragma once

#include <cstddef>
#include <cstdint>

#include "masscut/kernels.hpp"

namespace masscut::kernels {

namespace scalar {
void signed_distance(const double* cols, std::size_t n, std::size_t dim,
                     const double* normal, double offset, double* out);
void logistic(const double* in, std::size_t n, double scale, double* out);
void soft_orthant_mass(const double* probs, const double* weights,
                       std::size_t n, std::size_t h, double* out);
void classify(const double* dist, std::size_t n, std::size_t h, double tau,
              std::int32_t* codes);
}  // namespace scalar

#if defined(MASSCUT_HAVE_AVX2)
namespace avx2 {
void signed_distance(const double* cols, std::size_t n, std::size_t dim,
                     const double* normal, double offset, double* out);
void logistic(const double* in, std::size_t n, double scale, double* out);
void soft_orthant_mass(const double* probs, const double* weights,
                       std::size_t n, std::size_t h, double* out);
void classify(const double* dist, std::size_t n, std::size_t h, double tau,
              std::int32_t* codes);
}  // namespace avx2
#endif

}  // namespace masscut::kernels
