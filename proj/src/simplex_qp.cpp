#include "archpursuit/simplex_qp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "archpursuit/errors.hpp"
#include "archpursuit/nnls.hpp"

namespace archpursuit {

std::vector<double> project_simplex(std::span<const double> v) {
    if (v.empty()) throw ArgumentError("cannot project an empty vector onto the simplex");
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double cumulative = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        cumulative += sorted[j];
        const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) out[j] = std::max(0.0, v[j] - theta);
    return out;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

} // namespace

HullDistance distance_to_hull(const Matrix& A, std::span<const double> h, double tol, std::size_t max_iter) {
    if (A.rows() == 0) throw ArgumentError("hull of an empty point set");
    if (A.cols() != h.size()) throw ArgumentError("point dimension does not match the target");
    const std::size_t m = A.rows();

    // f(s) = 1/2 s'Qs - c's + 1/2 h'h with Q = AA^T and c = Ah.
    const Matrix Q = multiply_transposed(A, A);
    std::vector<double> c(m);
    double scale = dot(h, h);
    for (std::size_t j = 0; j < m; ++j) {
        c[j] = dot(A.row(j), h);
        scale = std::max(scale, Q(j, j));
    }
    const double hh = 0.5 * dot(h, h);
    const double target = tol * std::max(scale, 1e-300);

    auto times_q = [&](const std::vector<double>& s, std::vector<double>& out) {
        for (std::size_t i = 0; i < m; ++i) out[i] = dot(Q.row(i), s);
    };
    auto value = [&](const std::vector<double>& s, const std::vector<double>& Qs) {
        return 0.5 * dot(s, Qs) - dot(c, s) + hh;
    };
    // gap = g's - min_j g_j with g = Qs - c; bounds f(s) - f*.
    auto fw_gap = [&](const std::vector<double>& s, const std::vector<double>& Qs) {
        double gs = 0.0, gmin = INFINITY;
        for (std::size_t j = 0; j < m; ++j) {
            const double g = Qs[j] - c[j];
            gs += g * s[j];
            gmin = std::min(gmin, g);
        }
        return std::max(0.0, gs - gmin);
    };

    HullDistance out;
    std::vector<double> s(m, 1.0 / static_cast<double>(m)), Qs(m), y = s, Qy(m), z(m), Qz(m), step(m);
    times_q(s, Qs);
    Qy = Qs;
    double fs = value(s, Qs);
    double L = std::max(largest_eigenvalue(Q), 1e-300);
    double t = 1.0;
    bool momentum = false;

    out.gap = fw_gap(s, Qs);
    out.converged = out.gap <= target;
    for (std::size_t it = 1; it <= max_iter && !out.converged; ++it) {
        out.iterations = it;
        for (std::size_t j = 0; j < m; ++j) step[j] = y[j] - (Qy[j] - c[j]) / L;
        z = project_simplex(step);
        times_q(z, Qz);
        const double fz = value(z, Qz);
        if (fz > fs + 1e-15 * std::max(scale, 1e-300)) {
            if (momentum) {
                y = s;
                Qy = Qs;
                t = 1.0;
                momentum = false;
            } else {
                L *= 2.0;
            }
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        for (std::size_t j = 0; j < m; ++j) {
            y[j] = z[j] + beta * (z[j] - s[j]);
            Qy[j] = Qz[j] + beta * (Qz[j] - Qs[j]);
        }
        s.swap(z);
        Qs.swap(Qz);
        fs = std::min(fs, fz);
        t = t_next;
        momentum = true;
        out.gap = fw_gap(s, Qs);
        out.converged = out.gap <= target;
    }

    // Recompute the distance directly; the expanded objective loses digits near zero.
    std::vector<double> diff(h.begin(), h.end());
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t c2 = 0; c2 < diff.size(); ++c2) diff[c2] -= s[j] * A(j, c2);
    out.distance = std::sqrt(dot(diff, diff));
    out.weights = std::move(s);
    return out;
}

} // namespace archpursuit
