#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "archpursuit/matrix.hpp"

namespace archpursuit {

/// Euclidean projection onto the probability simplex (sort-based, exact).
std::vector<double> project_simplex(std::span<const double> v);

struct HullDistance {
    std::vector<double> weights; ///< s on the probability simplex
    double distance = 0;         ///< ||h - A^T s||_2
    double gap = 0;              ///< Frank-Wolfe duality gap of 1/2 ||h - A^T s||^2
    std::size_t iterations = 0;
    bool converged = false;
};

/// min over the simplex of ||h - A^T s||, A holding points as rows.
/// Accelerated projected gradient with monotone restart; stops once the
/// Frank-Wolfe gap falls below tol * (||h||^2 + max_j ||a_j||^2).
/// Throws ArgumentError on an empty A or a dimension mismatch.
HullDistance distance_to_hull(const Matrix& A, std::span<const double> h, double tol = 1e-15,
                              std::size_t max_iter = 200000);

} // namespace archpursuit
