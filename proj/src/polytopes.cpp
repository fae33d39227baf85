#include "archpursuit/polytopes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "archpursuit/errors.hpp"

namespace archpursuit {

namespace {

// Inverse of a small dense matrix by Gauss-Jordan with partial pivoting.
Matrix invert(Matrix a) {
    const std::size_t n = a.rows();
    Matrix inv = Matrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
        if (std::abs(a(pivot, col)) < 1e-14) throw ArgumentError("simplex vertices are affinely dependent");
        for (std::size_t c = 0; c < n; ++c) {
            std::swap(a(col, c), a(pivot, c));
            std::swap(inv(col, c), inv(pivot, c));
        }
        const double d = a(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            a(col, c) /= d;
            inv(col, c) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a(r, c) -= f * a(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

} // namespace

Polytope simplex_from_vertices(const Matrix& vertices, std::string name) {
    const std::size_t d = vertices.cols();
    if (vertices.rows() != d + 1 || d == 0) throw ArgumentError("a simplex in R^d needs d + 1 vertices");
    Polytope P;
    P.name = std::move(name);
    P.vertices = vertices;

    // Barycentric coordinate j (j >= 1) has gradient row j-1 of M^{-1},
    // M = [v_1 - v_0, ..., v_d - v_0]; coordinate 0 has minus their sum.
    Matrix M(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t c = 0; c < d; ++c) M(c, j) = vertices(j + 1, c) - vertices(0, c);
    const Matrix Minv = invert(M);
    Matrix outward(d + 1, d); // row j: outward normal of the facet opposite vertex j
    for (std::size_t j = 0; j <= d; ++j) {
        double sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            double g = 0.0;
            if (j == 0)
                for (std::size_t r = 0; r < d; ++r) g -= Minv(r, c);
            else
                g = Minv(j - 1, c);
            outward(j, c) = -g;
            sq += g * g;
        }
        for (std::size_t c = 0; c < d; ++c) outward(j, c) /= std::sqrt(sq);
    }

    P.neighbours.resize(d + 1);
    P.facet_normals.resize(d + 1);
    for (std::size_t i = 0; i <= d; ++i) {
        std::vector<std::size_t> opposite;
        for (std::size_t j = 0; j <= d; ++j) {
            if (j == i) continue;
            P.neighbours[i].push_back(j);
            opposite.push_back(j); // every facet except the one opposite i contains i
        }
        P.facet_normals[i] = select_rows(outward, opposite);
    }
    return P;
}

Polytope regular_polygon(std::size_t k) {
    if (k < 3) throw ArgumentError("a polygon needs at least three vertices");
    Polytope P;
    P.name = "polygon" + std::to_string(k);
    P.vertices = Matrix(k, 2);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
        P.vertices(i, 0) = std::cos(step * static_cast<double>(i));
        P.vertices(i, 1) = std::sin(step * static_cast<double>(i));
    }
    P.neighbours.resize(k);
    P.facet_normals.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t prev = (i + k - 1) % k, next = (i + 1) % k;
        P.neighbours[i] = {std::min(prev, next), std::max(prev, next)};
        Matrix normals(2, 2);
        for (std::size_t e = 0; e < 2; ++e) {
            // Edge (i, i+1) has outward normal at the midpoint angle.
            const double mid = step * (static_cast<double>(e == 0 ? prev : i) + 0.5);
            normals(e, 0) = std::cos(mid);
            normals(e, 1) = std::sin(mid);
        }
        P.facet_normals[i] = normals;
    }
    P.exact_omega.assign(k, 1.0 / static_cast<double>(k));
    return P;
}

Polytope regular_simplex(std::size_t k) {
    if (k < 2) throw ArgumentError("a simplex needs at least two vertices");
    const std::size_t d = k - 1;
    // Helmert basis vector b_j (j = 1..d): (1, ..., 1, -j, 0, ...) / sqrt(j (j + 1)).
    Matrix V(k, d);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 1; j <= d; ++j) {
            const double norm = std::sqrt(static_cast<double>(j * (j + 1)));
            double e = 0.0;
            if (i < j) e = 1.0;
            else if (i == j) e = -static_cast<double>(j);
            V(i, j - 1) = e / norm;
        }
    }
    Polytope P = simplex_from_vertices(V, "simplex" + std::to_string(k));
    P.exact_omega.assign(k, 1.0 / static_cast<double>(k));
    return P;
}

Polytope hypercube(std::size_t d) {
    if (d < 1 || d > 16) throw ArgumentError("hypercube dimension must lie in [1, 16]");
    const std::size_t count = std::size_t{1} << d;
    Polytope P;
    P.name = "cube" + std::to_string(d);
    P.vertices = Matrix(count, d);
    P.neighbours.resize(count);
    P.facet_normals.resize(count);
    for (std::size_t v = 0; v < count; ++v) {
        Matrix normals(d, d);
        for (std::size_t c = 0; c < d; ++c) {
            const bool bit = (v >> c) & 1U;
            P.vertices(v, c) = bit ? 1.0 : 0.0;
            normals(c, c) = bit ? 1.0 : -1.0;
            P.neighbours[v].push_back(v ^ (std::size_t{1} << c));
        }
        std::sort(P.neighbours[v].begin(), P.neighbours[v].end());
        P.facet_normals[v] = normals;
    }
    P.exact_omega.assign(count, 1.0 / static_cast<double>(count));
    return P;
}

Polytope needle_simplex(std::size_t d, double stretch) {
    if (!(stretch >= 1.0)) throw ArgumentError("needle stretch must be at least 1");
    Matrix V = regular_simplex(d + 1).vertices; // centroid at the origin
    for (std::size_t c = 0; c < d; ++c) V(0, c) *= stretch;
    return simplex_from_vertices(V, "needle" + std::to_string(d));
}

} // namespace archpursuit
