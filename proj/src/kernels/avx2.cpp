#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace masscut::kernels::avx2 {
namespace {

// exp(x) for x in [-708, 709]: Cody-Waite reduction by ln 2 and a degree-13
// Taylor polynomial on |r| <= ln(2)/2 (truncation error below 1e-17).
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-708.0);
  const __m256d hi = _mm256_set1_pd(709.0);
  x = _mm256_max_pd(_mm256_min_pd(x, hi), lo);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  // 1/13!, 1/12!, ..., 1/2!, 1, 1
  static constexpr double kCoeff[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0,
      1.0 / 3628800.0,    1.0 / 362880.0,    1.0 / 40320.0,
      1.0 / 5040.0,       1.0 / 720.0,       1.0 / 120.0,
      1.0 / 24.0,         1.0 / 6.0,         0.5,
      1.0,                1.0};
  __m256d p = _mm256_set1_pd(kCoeff[0]);
  for (std::size_t j = 1; j < std::size(kCoeff); ++j) {
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kCoeff[j]));
  }

  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i bits = _mm256_cvtepi32_epi64(k32);
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

void signed_distance(const double* cols, std::size_t n, std::size_t dim,
                     const double* normal, double offset, double* out) {
  std::size_t i = 0;
  const __m256d neg_offset = _mm256_set1_pd(-offset);
  for (; i + 4 <= n; i += 4) {
    __m256d acc = neg_offset;
    for (std::size_t k = 0; k < dim; ++k) {
      acc = _mm256_fmadd_pd(_mm256_set1_pd(normal[k]),
                            _mm256_loadu_pd(cols + k * n + i), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = -offset;
    for (std::size_t k = 0; k < dim; ++k) acc = std::fma(normal[k], cols[k * n + i], acc);
    out[i] = acc;
  }
}

void logistic(const double* in, std::size_t n, double scale, double* out) {
  const __m256d neg_scale = _mm256_set1_pd(-scale);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d e = exp_pd(_mm256_mul_pd(neg_scale, _mm256_loadu_pd(in + i)));
    _mm256_storeu_pd(out + i, _mm256_div_pd(one, _mm256_add_pd(one, e)));
  }
  for (; i < n; ++i) out[i] = 1.0 / (1.0 + std::exp(-scale * in[i]));
}

void soft_orthant_mass(const double* probs, const double* weights,
                       std::size_t n, std::size_t h, double* out) {
  const std::size_t codes = std::size_t{1} << h;
  const __m256d one = _mm256_set1_pd(1.0);
  const std::size_t body = n - n % 4;
  for (std::size_t s = 0; s < codes; ++s) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += 4) {
      __m256d prod = _mm256_loadu_pd(weights + i);
      for (std::size_t p = 0; p < h; ++p) {
        const __m256d q = _mm256_loadu_pd(probs + p * n + i);
        prod = _mm256_mul_pd(prod, ((s >> p) & 1U) ? q : _mm256_sub_pd(one, q));
      }
      acc = _mm256_add_pd(acc, prod);
    }
    double tail = 0.0;
    for (std::size_t i = body; i < n; ++i) {
      double prod = weights[i];
      for (std::size_t p = 0; p < h; ++p) {
        const double q = probs[p * n + i];
        prod *= ((s >> p) & 1U) ? q : 1.0 - q;
      }
      tail += prod;
    }
    out[s] = hsum(acc) + tail;
  }
}

void classify(const double* dist, std::size_t n, std::size_t h, double tau,
              std::int32_t* codes) {
  for (std::size_t i = 0; i < n; ++i) codes[i] = 0;
  const __m256d vtau = _mm256_set1_pd(tau);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  const std::size_t body = n - n % 4;
  for (std::size_t p = 0; p < h; ++p) {
    const double* row = dist + p * n;
    const std::int32_t bit = std::int32_t{1} << p;
    for (std::size_t i = 0; i < body; i += 4) {
      const __m256d d = _mm256_loadu_pd(row + i);
      const int on_plane =
          _mm256_movemask_pd(_mm256_cmp_pd(_mm256_and_pd(d, abs_mask), vtau, _CMP_LE_OQ));
      const int positive = _mm256_movemask_pd(_mm256_cmp_pd(d, zero, _CMP_GT_OQ));
      for (int lane = 0; lane < 4; ++lane) {
        std::int32_t& c = codes[i + lane];
        if (c == kBoundaryCode) continue;
        if ((on_plane >> lane) & 1) {
          c = kBoundaryCode;
        } else if ((positive >> lane) & 1) {
          c |= bit;
        }
      }
    }
    for (std::size_t i = body; i < n; ++i) {
      if (codes[i] == kBoundaryCode) continue;
      if (std::abs(row[i]) <= tau) {
        codes[i] = kBoundaryCode;
      } else if (row[i] > 0.0) {
        codes[i] |= bit;
      }
    }
  }
}

}  // namespace masscut::kernels::avx2
