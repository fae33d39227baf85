#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "archpursuit/matrix.hpp"

namespace archpursuit {

struct NnlsOptions {
    double tol = 1e-8;           ///< KKT sup-norm target
    std::size_t max_iter = 5000; ///< per row
};

struct NnlsSolution {
    Matrix W;                      ///< n x k, entrywise >= 0
    double relative_residual = 0;  ///< ||X - WH||_F / ||X||_F
    std::size_t iterations = 0;    ///< largest per-row iteration count
    bool converged = false;        ///< every row met the KKT tolerance
    double kkt = 0;                ///< largest per-row KKT residual at exit
    std::vector<std::size_t> zero_archetypes; ///< rows of H that are identically zero
};

/// Largest eigenvalue of a symmetric positive semidefinite matrix by power iteration.
double largest_eigenvalue(const Matrix& sym, std::size_t max_iter = 50, double tol = 1e-10);

/// Solves min_w 1/2 ||x - H^T w||^2, w >= 0, one data row at a time.
///
/// Accelerated projected gradient with step 1/L (L the top eigenvalue of
/// H H^T) and a monotone restart: whenever an accelerated step would raise the
/// objective, the momentum is dropped and a plain projected-gradient step is
/// taken from the last accepted iterate instead. Starts from w = 0.
class NnlsRowSolver {
public:
    explicit NnlsRowSolver(const Matrix& H, NnlsOptions options = {});

    struct RowResult {
        std::size_t iterations = 0;
        bool converged = false;
        double kkt = 0;
    };

    /// `objective_trace`, when given, receives 1/2 ||x - H^T w||^2 at every accepted iterate.
    RowResult solve(std::span<const double> x, std::span<double> w,
                    std::vector<double>* objective_trace = nullptr) const;

    const Matrix& gram() const noexcept { return gram_; }
    double lipschitz() const noexcept { return lipschitz_; }
    std::size_t rank_dim() const noexcept { return H_.rows(); }

private:
    Matrix H_;
    Matrix gram_;
    double lipschitz_;
    NnlsOptions options_;
};

/// Non-negative least squares for W in X ~ W H. Rows are solved independently,
/// so the result for a row never depends on which other rows are in X.
/// Throws ArgumentError on shape mismatch or an empty H, std::overflow_error
/// when a row is too large for double arithmetic.
NnlsSolution nnls_fit(const Matrix& X, const Matrix& H, double tol = 1e-8, std::size_t max_iter = 5000);

/// max_ij |min(W_ij, G_ij)| with G = (W H - X) H^T. Zero iff W solves the NNLS problem.
double kkt_residual(const Matrix& X, const Matrix& H, const Matrix& W);

/// 1/2 ||X - W H||_F^2
double least_squares_objective(const Matrix& X, const Matrix& H, const Matrix& W);

} // namespace archpursuit
