#include <cstdlib>

#include "kernels_impl.hpp"

namespace masscut::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::Scalar, "scalar", scalar::signed_distance,
                                 scalar::logistic, scalar::soft_orthant_mass,
                                 scalar::classify};
  return table;
}

std::optional<KernelTable> avx2_table() {
#if defined(MASSCUT_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return KernelTable{Isa::Avx2, "avx2", avx2::signed_distance, avx2::logistic,
                       avx2::soft_orthant_mass, avx2::classify};
  }
#endif
  return std::nullopt;
}

std::optional<Isa> parse_isa(std::string_view name) {
  if (name == "scalar") return Isa::Scalar;
  if (name == "avx2") return Isa::Avx2;
  return std::nullopt;
}

namespace {

KernelTable select() {
  std::optional<Isa> wanted;
  if (const char* env = std::getenv("MASSCUT_KERNELS")) wanted = parse_isa(env);
  if (wanted != Isa::Scalar) {
    if (auto t = avx2_table()) return *t;
  }
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable table = select();
  return table;
}

}  // namespace masscut::kernels
