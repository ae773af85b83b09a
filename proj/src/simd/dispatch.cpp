#include <cstdlib>
#include <string_view>

#include "polydens/error.hpp"
#include "polydens/simd/kernels.hpp"

namespace polydens::simd {

namespace detail {
#ifdef POLYDENS_HAVE_AVX2_TU
extern const KernelTable kAvx2Table;
#endif
#ifdef POLYDENS_HAVE_NEON_TU
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &detail::kScalarTable;
    case Isa::Avx2:
#ifdef POLYDENS_HAVE_AVX2_TU
      __builtin_cpu_init();
      if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &detail::kAvx2Table;
#endif
      return nullptr;
    case Isa::Neon:
#ifdef POLYDENS_HAVE_NEON_TU
      return &detail::kNeonTable;
#else
      return nullptr;
#endif
  }
  return nullptr;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (kernels_for(isa) != nullptr) out.push_back(isa);
  }
  return out;
}

namespace {

const KernelTable& select_table() {
  if (const char* env = std::getenv("POLYDENS_SIMD"); env != nullptr && *env != '\0') {
    const std::string_view want(env);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (want == to_string(isa)) {
        if (const auto* table = kernels_for(isa)) return *table;
        fail(Errc::InvalidArgument, "POLYDENS_SIMD requests an unavailable kernel set");
      }
    }
    if (want != "auto") fail(Errc::InvalidArgument, "POLYDENS_SIMD must be scalar, avx2, neon or auto");
  }
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (const auto* table = kernels_for(isa)) return *table;
  }
  return detail::kScalarTable;
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select_table();
  return table;
}

}  // namespace polydens::simd
