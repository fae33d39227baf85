#include "archpursuit/glasso.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "archpursuit/errors.hpp"
#include "archpursuit/nnls.hpp"
#include "archpursuit/parallel.hpp"
#include "archpursuit/simd/kernels.hpp"

namespace archpursuit {

namespace {

// (v, s) with v = data[0], data[stride], ... (count entries) and s = height.
void soc_strided(double* data, std::size_t count, std::size_t stride, double& height) {
    double sq = 0.0;
    for (std::size_t i = 0; i < count; ++i) sq += data[i * stride] * data[i * stride];
    const double v = std::sqrt(sq);
    const double s = height;
    if (v <= s) return;
    if (v <= -s) {
        for (std::size_t i = 0; i < count; ++i) data[i * stride] = 0.0;
        height = 0.0;
        return;
    }
    const double scale = 0.5 * (v + s);
    for (std::size_t i = 0; i < count; ++i) data[i * stride] *= scale / v;
    height = scale;
}

void cone_orthant_strided(double* data, std::size_t count, std::size_t stride, double& height) {
    for (std::size_t i = 0; i < count; ++i) data[i * stride] = std::max(0.0, data[i * stride]);
    soc_strided(data, count, stride, height);
}

} // namespace

void project_soc(std::span<double> x) {
    if (x.size() < 2) throw ArgumentError("cone projection needs at least two coordinates");
    soc_strided(x.data(), x.size() - 1, 1, x.back());
}

void project_cone_orthant_inplace(std::span<double> x) {
    if (x.size() < 2) throw ArgumentError("cone projection needs at least two coordinates");
    cone_orthant_strided(x.data(), x.size() - 1, 1, x.back());
}

std::vector<double> project_cone_orthant(std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    project_cone_orthant_inplace(y);
    return y;
}

double lambda_max(const Matrix& X, const Matrix& H) {
    if (X.cols() != H.cols()) throw ArgumentError("X and H have different column counts");
    const Matrix B = multiply_transposed(X, H);
    double best = 0.0;
    for (std::size_t i = 0; i < H.rows(); ++i) {
        double sq = 0.0;
        for (std::size_t r = 0; r < B.rows(); ++r) {
            const double v = std::max(0.0, B(r, i));
            sq += v * v;
        }
        best = std::max(best, std::sqrt(sq));
    }
    return best;
}

std::vector<double> default_lambda_grid(double lmax, std::size_t count, double ratio) {
    if (!(lmax > 0.0)) throw ArgumentError("lambda_max must be positive to build a grid");
    if (count < 1) throw ArgumentError("grid needs at least one point");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ArgumentError("grid ratio must lie in (0, 1)");
    std::vector<double> grid(count);
    const double step = count > 1 ? std::log(ratio) / static_cast<double>(count - 1) : 0.0;
    for (std::size_t j = 0; j < count; ++j) grid[j] = lmax * std::exp(step * static_cast<double>(j));
    return grid;
}

void GroupLassoProblem::validate() const {
    if (H.rows() == 0) throw ArgumentError("group lasso needs at least one candidate");
    if (X.rows() == 0) throw ArgumentError("group lasso needs at least one data row");
    if (X.cols() != H.cols()) throw ArgumentError("X and H have different column counts");
    if (lambda_grid.empty()) throw ArgumentError("lambda grid is empty");
    for (std::size_t j = 0; j < lambda_grid.size(); ++j) {
        if (!(lambda_grid[j] > 0.0) || !std::isfinite(lambda_grid[j]))
            throw ArgumentError("lambda values must be positive and finite");
        if (j > 0 && !(lambda_grid[j] < lambda_grid[j - 1]))
            throw ArgumentError("lambda grid must be strictly descending");
    }
}

namespace {

// out = A * Q with A n x k and Q k x k symmetric.
void times_gram(const Matrix& A, const Matrix& Q, Matrix& out) {
    const auto& ker = simd::kernels();
    const std::size_t k = Q.rows();
    constexpr std::size_t kChunk = 128;
    parallel_for((A.rows() + kChunk - 1) / kChunk, [&](std::size_t c) {
        const std::size_t end = std::min(A.rows(), (c + 1) * kChunk);
        for (std::size_t r = c * kChunk; r < end; ++r)
            for (std::size_t j = 0; j < k; ++j) out(r, j) = ker.dot(A.row(r).data(), Q.row(j).data(), k);
    });
}

double inner(const Matrix& a, const Matrix& b) {
    return simd::kernels().dot(a.values().data(), b.values().data(), a.size());
}

struct ConeSolver {
    const Matrix& Q;
    const Matrix& B;
    double half_xx;
    double L;
    std::size_t n, k;

    // 1/2 ||X - WH||^2 + lambda sum t from the expansion through Q and B.
    double objective(const Matrix& W, const Matrix& WQ, const std::vector<double>& t, double lambda) const {
        return half_xx - inner(W, B) + 0.5 * inner(W, WQ) + lambda * std::accumulate(t.begin(), t.end(), 0.0);
    }

    // Projects every group (column of W with its height) onto the cone-orthant set.
    void project(Matrix& W, std::vector<double>& t) const {
        // Column i of the row-major W is the strided group.
        parallel_for(k, [&](std::size_t i) { cone_orthant_strided(W.values().data() + i, n, k, t[i]); });
    }
};

} // namespace

LassoPath solve_path(const GroupLassoProblem& prob, double tol, const GroupLassoOptions& options) {
    prob.validate();
    if (!(tol >= 0.0)) throw ArgumentError("tolerance must be non-negative");
    if (options.window < 1) throw ArgumentError("stopping window must be at least 1");

    const std::size_t n = prob.X.rows();
    const std::size_t k = prob.H.rows();
    const Matrix Q = multiply_transposed(prob.H, prob.H);
    const Matrix B = multiply_transposed(prob.X, prob.H);
    const double xnorm = frobenius_norm(prob.X);
    ConeSolver solver{Q, B, 0.5 * xnorm * xnorm, largest_eigenvalue(Q), n, k};
    const double zero_above = lambda_max(prob.X, prob.H);

    LassoPath path;
    path.groups = k;

    Matrix W(n, k), WQ(n, k), Y(n, k), YQ(n, k), Z(n, k), ZQ(n, k);
    std::vector<double> t(k, 0.0), ty(k, 0.0), tz(k, 0.0);

    for (double lambda : prob.lambda_grid) {
        PathPoint point;
        point.lambda = lambda;
        double L = solver.L;
        if (lambda >= zero_above) {
            // W = 0 satisfies the optimality conditions exactly; skip the
            // iterations, whose rounding could leave dust at lambda = lambda_max.
            W = Matrix(n, k);
            std::fill(t.begin(), t.end(), 0.0);
            point.converged = true;
        } else if (L > 0.0) {
            times_gram(W, Q, WQ);
            Y = W;
            YQ = WQ;
            ty = t;
            double fw = solver.objective(W, WQ, t, lambda);
            double momentum_t = 1.0;
            bool momentum = false;
            std::deque<double> history{fw};

            for (std::size_t it = 1; it <= options.max_iter; ++it) {
                point.iterations = it;
                for (std::size_t e = 0; e < Z.size(); ++e)
                    Z.values()[e] = Y.values()[e] - (YQ.values()[e] - B.values()[e]) / L;
                for (std::size_t i = 0; i < k; ++i) tz[i] = ty[i] - lambda / L;
                solver.project(Z, tz);
                times_gram(Z, Q, ZQ);
                const double fz = solver.objective(Z, ZQ, tz, lambda);

                const double slack = 1e-13 * std::max({1.0, std::abs(fw), solver.half_xx});
                if (fz > fw + slack) {
                    if (momentum) {
                        Y = W;
                        YQ = WQ;
                        ty = t;
                        momentum_t = 1.0;
                        momentum = false;
                    } else {
                        L *= 2.0;
                    }
                    continue;
                }

                const double next_t = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum_t * momentum_t));
                const double beta = (momentum_t - 1.0) / next_t;
                for (std::size_t e = 0; e < Z.size(); ++e) {
                    Y.values()[e] = Z.values()[e] + beta * (Z.values()[e] - W.values()[e]);
                    YQ.values()[e] = ZQ.values()[e] + beta * (ZQ.values()[e] - WQ.values()[e]);
                }
                for (std::size_t i = 0; i < k; ++i) ty[i] = tz[i] + beta * (tz[i] - t[i]);
                std::swap(W, Z);
                std::swap(WQ, ZQ);
                std::swap(t, tz);
                fw = std::min(fw, fz);
                momentum_t = next_t;
                momentum = true;

                history.push_back(fz);
                if (history.size() > options.window + 1) history.pop_front();
                if (history.size() == options.window + 1 &&
                    std::abs(history.front() - history.back()) <= tol * std::abs(history.back())) {
                    point.converged = true;
                    break;
                }
            }
        } else {
            point.converged = true; // H == 0: W = 0 is optimal for every lambda
        }

        point.W = W;
        point.group_norms.assign(k, 0.0);
        double largest = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            double sq = 0.0;
            for (std::size_t r = 0; r < n; ++r) sq += W(r, i) * W(r, i);
            point.group_norms[i] = std::sqrt(sq);
            largest = std::max(largest, point.group_norms[i]);
        }
        for (std::size_t i = 0; i < k; ++i)
            if (largest > 0.0 && point.group_norms[i] > options.activity_ratio * largest) point.active.push_back(i);
        const double resid = frobenius_norm(subtract(prob.X, multiply(W, prob.H)));
        point.data_fit = 0.5 * resid * resid;
        point.objective =
            point.data_fit + lambda * std::accumulate(point.group_norms.begin(), point.group_norms.end(), 0.0);
        path.points.push_back(std::move(point));
    }
    return path;
}

std::vector<double> persistence(const LassoPath& path) {
    std::vector<double> measure(path.groups, 0.0);
    const auto& pts = path.points;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        double width = 1.0;
        if (pts.size() > 1) {
            const std::size_t a = j == 0 ? 0 : j - 1;
            width = std::log(pts[a].lambda / pts[a + 1].lambda);
        }
        for (std::size_t i : pts[j].active) measure[i] += width;
    }
    return measure;
}

PersistenceSelection select_by_persistence(const LassoPath& path, std::size_t k) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    const auto measure = persistence(path);
    const std::vector<double> zeros(path.groups, 0.0);
    const auto& last_norms = path.points.empty() ? zeros : path.points.back().group_norms;
    std::vector<std::size_t> order(path.groups);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (measure[a] != measure[b]) return measure[a] > measure[b];
        return last_norms[a] > last_norms[b];
    });
    PersistenceSelection out;
    out.underfull = k > order.size();
    order.resize(std::min(k, order.size()));
    out.indices = std::move(order);
    return out;
}

Matrix path_table(const LassoPath& path) {
    Matrix out(path.points.size() * path.groups, 4);
    std::size_t r = 0;
    for (const auto& pt : path.points) {
        for (std::size_t i = 0; i < path.groups; ++i, ++r) {
            out(r, 0) = pt.lambda;
            out(r, 1) = static_cast<double>(i);
            out(r, 2) = pt.group_norms[i];
            out(r, 3) = std::binary_search(pt.active.begin(), pt.active.end(), i) ? 1.0 : 0.0;
        }
    }
    return out;
}

} // namespace archpursuit
