#include "archpursuit/matrix.hpp"

#include <cmath>

#include "archpursuit/errors.hpp"
#include "archpursuit/simd/kernels.hpp"

namespace archpursuit {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
        throw ArgumentError("matrix value count does not match its shape");
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix select_rows(const Matrix& a, std::span<const std::size_t> indices) {
    Matrix out(indices.size(), a.cols());
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (indices[r] >= a.rows()) throw ArgumentError("row index out of range");
        const auto src = a.row(indices[r]);
        std::copy(src.begin(), src.end(), out.row(r).begin());
    }
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw ArgumentError("multiply: inner dimensions differ");
    Matrix out(a.rows(), b.cols());
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto dst = out.row(i);
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const double s = a(i, l);
            if (s != 0.0) k.axpy(s, b.row(l).data(), dst.data(), b.cols());
        }
    }
    return out;
}

Matrix multiply_transposed(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) throw ArgumentError("multiply_transposed: column counts differ");
    Matrix out(a.rows(), b.rows());
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j)
            out(i, j) = k.dot(a.row(i).data(), b.row(j).data(), a.cols());
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ArgumentError("subtract: shapes differ");
    Matrix out = a;
    auto dst = out.values();
    const auto src = b.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= src[i];
    return out;
}

double frobenius_norm(const Matrix& a) {
    const auto v = a.values();
    return std::sqrt(simd::kernels().dot(v.data(), v.data(), v.size()));
}

double relative_frobenius_error(const Matrix& a, const Matrix& b) {
    const double diff = frobenius_norm(subtract(a, b));
    const double scale = frobenius_norm(b);
    return scale > 0.0 ? diff / scale : diff;
}

bool all_finite(const Matrix& a) {
    for (double v : a.values())
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix normalize_rows(const Matrix& a) {
    Matrix out = a;
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < out.rows(); ++i) {
        auto r = out.row(i);
        const double norm = std::sqrt(k.dot(r.data(), r.data(), r.size()));
        if (norm > 0.0)
            for (double& v : r) v /= norm;
    }
    return out;
}

} // namespace archpursuit
