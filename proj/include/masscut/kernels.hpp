#pragma once

// Data-parallel inner loops shared by the verifier and the solver.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant. The variant is picked once at startup from the CPU's
// feature flags; setting MASSCUT_KERNELS=scalar forces the reference path.
// Point coordinates are passed column-major: coordinate k of point i lives
// at cols[k * n + i].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace masscut::kernels {

enum class Isa { Scalar, Avx2 };

/// Code written by `classify` for points within tau of some plane.
inline constexpr std::int32_t kBoundaryCode = -1;

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// out[i] = sum_k normal[k] * cols[k * n + i] - offset
  void (*signed_distance)(const double* cols, std::size_t n, std::size_t dim,
                          const double* normal, double offset, double* out);

  /// out[i] = 1 / (1 + exp(-scale * in[i]))
  void (*logistic)(const double* in, std::size_t n, double scale, double* out);

  /// Soft orthant masses. probs is h rows of n values, row p holding the
  /// probability that each point lies on the + side of plane p. Writes
  /// out[s] = sum_i w_i * prod_p (bit p of s ? probs[p][i] : 1 - probs[p][i])
  /// for all 2^h codes s.
  void (*soft_orthant_mass)(const double* probs, const double* weights,
                            std::size_t n, std::size_t h, double* out);

  /// Orthant codes from h rows of signed distances: bit p is set when the
  /// point is strictly on the + side of plane p. Points with |dist| <= tau
  /// against any plane get kBoundaryCode.
  void (*classify)(const double* dist, std::size_t n, std::size_t h,
                   double tau, std::int32_t* codes);
};

const KernelTable& scalar_table();

/// The AVX2 table when compiled in and supported by this CPU.
std::optional<KernelTable> avx2_table();

/// Table used by the library for this process.
const KernelTable& active();

/// Parses "scalar" / "avx2".
std::optional<Isa> parse_isa(std::string_view name);

}  // namespace masscut::kernels
