#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference version and
// optional vector versions; the table is chosen once at first use from the
// CPU features, or from POLYDENS_SIMD=scalar|avx2|neon when set.
//
// Vector versions use a different summation order (and FMA, and a
// polynomial sincos for the characteristic-function sums), so results agree
// with the scalar reference to rounding, not bit for bit. A given table is
// deterministic.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace polydens::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

struct CfSums {
  double re = 0.0;  // sum of cos(t v)
  double im = 0.0;  // sum of sin(t v)
};

struct CenteredSums {
  double s1 = 0.0;  // sum of (v - c)
  double s2 = 0.0;  // sum of (v - c)^2
};

struct KernelTable {
  Isa isa;
  /// sum |a_i - b_i|; a and b have equal length.
  double (*l1_distance)(std::span<const double> a, std::span<const double> b);
  double (*abs_sum)(std::span<const double> a);
  double (*dot)(std::span<const double> a, std::span<const double> b);
  CfSums (*cf_sums)(std::span<const double> v, double t);
  CenteredSums (*centered_sums)(std::span<const double> v, double c);
};

const KernelTable& kernels();

/// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* kernels_for(Isa isa);

std::vector<Isa> available_isas();

namespace detail {
extern const KernelTable kScalarTable;
}  // namespace detail

}  // namespace polydens::simd
