#include "archpursuit/simd/kernels.hpp"

namespace archpursuit::simd {

namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void dot4_scalar(const double* x, const double* g, std::size_t stride, std::size_t n, double* out) {
    for (std::size_t j = 0; j < 4; ++j) out[j] = dot_scalar(x, g + j * stride, n);
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double squared_distance_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void update_extrema_scalar(const double* values, std::size_t count, std::int64_t row, double* max_value,
                           std::int64_t* max_index, double* min_value, std::int64_t* min_index) {
    for (std::size_t j = 0; j < count; ++j) {
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

constexpr KernelTable kScalar{Isa::scalar,       dot_scalar,           dot4_scalar, axpy_scalar,
                              squared_distance_scalar, update_extrema_scalar};

} // namespace

const KernelTable& scalar_kernels() noexcept { return kScalar; }

} // namespace archpursuit::simd
