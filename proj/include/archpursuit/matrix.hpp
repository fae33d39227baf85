#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace archpursuit {

/// Dense row-major matrix. Rows are data points.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), values_(rows * cols, fill) {}
    /// Throws ArgumentError if values.size() != rows * cols.
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {values_.data() + i * cols_, cols_};
    }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    static Matrix identity(std::size_t n);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> values_;
};

Matrix transpose(const Matrix& a);
/// Rows of `a` listed in `indices`, in that order.
Matrix select_rows(const Matrix& a, std::span<const std::size_t> indices);
Matrix multiply(const Matrix& a, const Matrix& b);
/// a * b^T; both operands are read along rows.
Matrix multiply_transposed(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
/// ||a - b||_F / ||b||_F, or ||a||_F when b is zero.
double relative_frobenius_error(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& a);
/// Copy with every nonzero row scaled to unit l2 norm.
Matrix normalize_rows(const Matrix& a);

} // namespace archpursuit
