#pragma once

// Non-negative group lasso over candidate archetypes,
//   min 1/2 ||X - W H||_F^2 + lambda * sum_i ||w_i||_2,  W >= 0,
// with w_i the i-th column of W. Solved in the cone form: variables (w_i, t_i)
// constrained to the second-order cone intersected with the non-negative
// orthant, penalty lambda * sum_i t_i.

#include <cstddef>
#include <span>
#include <vector>

#include "archpursuit/matrix.hpp"

namespace archpursuit {

/// Projection of (v, s) onto {||v|| <= s}. In place.
void project_soc(std::span<double> x);

/// Projection onto the second-order cone intersected with the orthant: clip the
/// leading q-1 coordinates at zero, then project onto the cone. The last
/// coordinate is the cone height. Throws ArgumentError when q < 2.
std::vector<double> project_cone_orthant(std::span<const double> x);
void project_cone_orthant_inplace(std::span<double> x);

/// Smallest lambda at which W = 0 is optimal: max_i ||(X h_i^T)_+||_2.
double lambda_max(const Matrix& X, const Matrix& H);

/// `count` log-spaced values from lmax down to ratio * lmax.
std::vector<double> default_lambda_grid(double lmax, std::size_t count = 50, double ratio = 1e-3);

struct GroupLassoProblem {
    Matrix X;                        ///< n x p
    Matrix H;                        ///< k x p candidate archetypes
    std::vector<double> lambda_grid; ///< strictly descending, positive

    void validate() const;
};

struct GroupLassoOptions {
    std::size_t window = 10;         ///< iterations over which the relative change is measured
    std::size_t max_iter = 20000;    ///< per lambda
    double activity_ratio = 1e-6;    ///< active iff ||w_i|| > ratio * max_j ||w_j||
};

struct PathPoint {
    double lambda = 0;
    Matrix W;                        ///< n x k, >= 0
    std::vector<double> group_norms; ///< ||w_i||_2
    std::vector<std::size_t> active; ///< ascending
    double objective = 0;            ///< 1/2 ||X - WH||^2 + lambda * sum ||w_i||
    double data_fit = 0;             ///< 1/2 ||X - WH||^2
    std::size_t iterations = 0;
    bool converged = false;
};

struct LassoPath {
    std::size_t groups = 0;
    std::vector<PathPoint> points; ///< in grid order
};

/// Accelerated projected gradient per lambda, warm-started along the grid.
/// A solve stops once the objective changes by less than tol (relative) over
/// `window` iterations. Throws ArgumentError for a non-descending grid.
LassoPath solve_path(const GroupLassoProblem& prob, double tol = 1e-10, const GroupLassoOptions& options = {});

/// Log-lambda measure over which each group is active. Grid point j owns
/// log(lambda_{j-1} / lambda_j); the first point owns the same width as the second.
std::vector<double> persistence(const LassoPath& path);

struct PersistenceSelection {
    std::vector<std::size_t> indices; ///< group indices, most persistent first
    bool underfull = false;           ///< k exceeded the number of groups
};

/// Top k groups by persistence; ties go to the larger ||w_i|| at the smallest
/// lambda, then to the lower index. Throws ArgumentError when k = 0.
PersistenceSelection select_by_persistence(const LassoPath& path, std::size_t k);

/// Rows (lambda, group_index, group_norm, active_flag) for every point and group.
Matrix path_table(const LassoPath& path);

} // namespace archpursuit
