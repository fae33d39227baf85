#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "archpursuit/matrix.hpp"

namespace archpursuit {

/// A polytope with known combinatorics, for checking the geometric lemmas.
struct Polytope {
    std::string name;
    Matrix vertices;                                ///< one vertex per row, all extreme
    std::vector<std::vector<std::size_t>> neighbours; ///< vertices sharing an edge
    std::vector<Matrix> facet_normals;              ///< per vertex: unit outward normals of incident facets
    std::vector<double> exact_omega;                ///< normal-cone solid angles when known by symmetry; else empty

    std::size_t dim() const noexcept { return vertices.cols(); }
    std::size_t size() const noexcept { return vertices.rows(); }
};

/// k-gon inscribed in the unit circle. Throws ArgumentError when k < 3.
Polytope regular_polygon(std::size_t k);

/// k vertices in R^(k-1): the centred standard basis of R^k expressed in an
/// orthonormal (Helmert) basis of the sum-zero hyperplane. Edge length sqrt(2).
/// Throws ArgumentError when k < 2.
Polytope regular_simplex(std::size_t k);

/// {0,1}^d. Throws ArgumentError when d < 1 or d > 16.
Polytope hypercube(std::size_t d);

/// regular_simplex(d + 1) with vertex 0 pushed away from the centroid so its
/// distance grows by `stretch`. Throws ArgumentError unless stretch >= 1.
Polytope needle_simplex(std::size_t d, double stretch);

/// Any full-dimensional simplex: d + 1 affinely independent rows in R^d.
Polytope simplex_from_vertices(const Matrix& vertices, std::string name = "simplex");

} // namespace archpursuit
