#pragma once

// Inner-loop kernels with a scalar reference and an AVX2+FMA variant chosen at
// runtime. Contracts shared by every variant:
//
//   * dot4(x, g, stride, n, out)[j] is bit-identical to dot(x, g + j*stride, n)
//     within one variant.
//   * update_extrema is exact (comparisons only) and identical across variants:
//     a candidate replaces the running max (min) when it is strictly larger
//     (smaller), or equal with a smaller row index.
//   * Floating-point sums may differ between variants by rounding only.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace archpursuit::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    void (*dot4)(const double* x, const double* g, std::size_t stride, std::size_t n, double* out);
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    void (*update_extrema)(const double* values, std::size_t count, std::int64_t row, double* max_value,
                           std::int64_t* max_index, double* min_value, std::int64_t* min_index);
};

const KernelTable& scalar_kernels() noexcept;
const KernelTable& avx2_kernels() noexcept;

bool isa_supported(Isa isa) noexcept;
/// Best supported variant, unless ARCHPURSUIT_SIMD=scalar forces the reference.
Isa detect_isa() noexcept;

/// The process-wide active table.
const KernelTable& kernels() noexcept;
const KernelTable& kernels(Isa isa);
/// Throws ArgumentError if the CPU lacks `isa`.
void set_active_isa(Isa isa);
Isa active_isa() noexcept;

std::string_view isa_name(Isa isa) noexcept;

} // namespace archpursuit::simd
