// AVX2 + FMA variants. Functions carry a target attribute so the rest of the
// library stays baseline x86-64 and the table is only installed after a CPUID
// check.

#include "archpursuit/simd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define ARCHPURSUIT_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

namespace archpursuit::simd {

#ifdef ARCHPURSUIT_HAVE_AVX2_TU

#define AP_AVX2 __attribute__((target("avx2,fma")))

namespace {

AP_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Shared tail so dot and dot4 round identically: an optional 4-wide step into
// acc0, horizontal reduction, then scalar FMAs in index order.
AP_AVX2 inline double finish_dot(__m256d acc0, __m256d acc1, const double* x, const double* g,
                                 std::size_t i, std::size_t n) {
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(g + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s = __builtin_fma(x[i], g[i], s);
    return s;
}

AP_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    return finish_dot(acc0, acc1, a, b, i, n);
}

AP_AVX2 void dot4_avx2(const double* x, const double* g, std::size_t stride, std::size_t n, double* out) {
    const double* g0 = g;
    const double* g1 = g + stride;
    const double* g2 = g + 2 * stride;
    const double* g3 = g + 3 * stride;
    __m256d a00 = _mm256_setzero_pd(), a01 = _mm256_setzero_pd();
    __m256d a10 = _mm256_setzero_pd(), a11 = _mm256_setzero_pd();
    __m256d a20 = _mm256_setzero_pd(), a21 = _mm256_setzero_pd();
    __m256d a30 = _mm256_setzero_pd(), a31 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d x0 = _mm256_loadu_pd(x + i);
        const __m256d x1 = _mm256_loadu_pd(x + i + 4);
        a00 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(g0 + i), a00);
        a01 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(g0 + i + 4), a01);
        a10 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(g1 + i), a10);
        a11 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(g1 + i + 4), a11);
        a20 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(g2 + i), a20);
        a21 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(g2 + i + 4), a21);
        a30 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(g3 + i), a30);
        a31 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(g3 + i + 4), a31);
    }
    out[0] = finish_dot(a00, a01, x, g0, i, n);
    out[1] = finish_dot(a10, a11, x, g1, i, n);
    out[2] = finish_dot(a20, a21, x, g2, i, n);
    out[3] = finish_dot(a30, a31, x, g3, i, n);
}

AP_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d a = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] = __builtin_fma(alpha, x[i], y[i]);
}

AP_AVX2 double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    if (i + 4 <= n) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc0 = _mm256_fmadd_pd(d, d, acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s = __builtin_fma(d, d, s);
    }
    return s;
}

AP_AVX2 void update_extrema_avx2(const double* values, std::size_t count, std::int64_t row, double* max_value,
                                 std::int64_t* max_index, double* min_value, std::int64_t* min_index) {
    const __m256i rowv = _mm256_set1_epi64x(row);
    std::size_t j = 0;
    for (; j + 4 <= count; j += 4) {
        const __m256d v = _mm256_loadu_pd(values + j);

        const __m256d mx = _mm256_loadu_pd(max_value + j);
        const __m256i mxi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(max_index + j));
        const __m256d earlier_max = _mm256_castsi256_pd(_mm256_cmpgt_epi64(mxi, rowv));
        const __m256d take_max = _mm256_or_pd(
            _mm256_cmp_pd(v, mx, _CMP_GT_OQ), _mm256_and_pd(_mm256_cmp_pd(v, mx, _CMP_EQ_OQ), earlier_max));
        _mm256_storeu_pd(max_value + j, _mm256_blendv_pd(mx, v, take_max));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(max_index + j),
                            _mm256_castpd_si256(_mm256_blendv_pd(_mm256_castsi256_pd(mxi),
                                                                 _mm256_castsi256_pd(rowv), take_max)));

        const __m256d mn = _mm256_loadu_pd(min_value + j);
        const __m256i mni = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(min_index + j));
        const __m256d earlier_min = _mm256_castsi256_pd(_mm256_cmpgt_epi64(mni, rowv));
        const __m256d take_min = _mm256_or_pd(
            _mm256_cmp_pd(v, mn, _CMP_LT_OQ), _mm256_and_pd(_mm256_cmp_pd(v, mn, _CMP_EQ_OQ), earlier_min));
        _mm256_storeu_pd(min_value + j, _mm256_blendv_pd(mn, v, take_min));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(min_index + j),
                            _mm256_castpd_si256(_mm256_blendv_pd(_mm256_castsi256_pd(mni),
                                                                 _mm256_castsi256_pd(rowv), take_min)));
    }
    for (; j < count; ++j) {
        const double v = values[j];
        if (v > max_value[j] || (v == max_value[j] && row < max_index[j])) {
            max_value[j] = v;
            max_index[j] = row;
        }
        if (v < min_value[j] || (v == min_value[j] && row < min_index[j])) {
            min_value[j] = v;
            min_index[j] = row;
        }
    }
}

constexpr KernelTable kAvx2{Isa::avx2,           dot_avx2,           dot4_avx2, axpy_avx2,
                            squared_distance_avx2, update_extrema_avx2};

} // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

bool avx2_runtime_supported() noexcept {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

const KernelTable& avx2_kernels() noexcept { return scalar_kernels(); }
bool avx2_runtime_supported() noexcept { return false; }

#endif

} // namespace archpursuit::simd
