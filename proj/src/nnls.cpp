#include "archpursuit/nnls.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "archpursuit/errors.hpp"
#include "archpursuit/parallel.hpp"
#include "archpursuit/rng.hpp"
#include "archpursuit/simd/kernels.hpp"

namespace archpursuit {

namespace {

void symmetric_times(const Matrix& Q, std::span<const double> v, std::span<double> out) {
    const auto& k = simd::kernels();
    for (std::size_t i = 0; i < Q.rows(); ++i) out[i] = k.dot(Q.row(i).data(), v.data(), v.size());
}

double dot(std::span<const double> a, std::span<const double> b) {
    return simd::kernels().dot(a.data(), b.data(), a.size());
}

} // namespace

double largest_eigenvalue(const Matrix& sym, std::size_t max_iter, double tol) {
    const std::size_t k = sym.rows();
    if (k == 0) return 0.0;
    if (sym.cols() != k) throw ArgumentError("largest_eigenvalue needs a square matrix");
    if (k == 1) return sym(0, 0);

    // A fixed pseudo-random start avoids starting orthogonal to the top eigenvector
    // for structured inputs.
    std::vector<double> v(k), next(k);
    RngStream rng(CounterRng(0x5eedULL, Domain::instance));
    for (double& x : v) x = 1.0 + 0.5 * rng.uniform();
    double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;

    double estimate = 0.0;
    for (std::size_t it = 0; it < max_iter; ++it) {
        symmetric_times(sym, v, next);
        const double rayleigh = dot(v, next);
        norm = std::sqrt(dot(next, next));
        if (norm == 0.0) return 0.0;
        for (std::size_t i = 0; i < k; ++i) v[i] = next[i] / norm;
        const bool settled = it > 0 && std::abs(rayleigh - estimate) <= tol * std::abs(rayleigh);
        estimate = rayleigh;
        if (settled) break;
    }
    return std::max(estimate, norm);
}

NnlsRowSolver::NnlsRowSolver(const Matrix& H, NnlsOptions options)
    : H_(H), gram_(multiply_transposed(H, H)), lipschitz_(largest_eigenvalue(gram_)), options_(options) {
    if (H.rows() == 0) throw ArgumentError("NNLS needs at least one archetype");
}

NnlsRowSolver::RowResult NnlsRowSolver::solve(std::span<const double> x, std::span<double> w,
                                              std::vector<double>* objective_trace) const {
    const std::size_t k = H_.rows();
    if (x.size() != H_.cols() || w.size() != k) throw ArgumentError("NNLS row has the wrong shape");
    const auto& ker = simd::kernels();

    std::vector<double> b(k);
    for (std::size_t j = 0; j < k; ++j) b[j] = ker.dot(H_.row(j).data(), x.data(), x.size());
    const double half_xx = 0.5 * ker.dot(x.data(), x.data(), x.size());
    if (!std::isfinite(half_xx) || !std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); }))
        throw std::overflow_error("NNLS row overflows double precision");

    std::fill(w.begin(), w.end(), 0.0);
    RowResult result;
    if (lipschitz_ <= 0.0) {
        // H == 0: every w is optimal and the gradient vanishes.
        result.converged = true;
        if (objective_trace) objective_trace->push_back(half_xx);
        return result;
    }

    // f(w) = 1/2 w'Qw - b'w; the constant 1/2 x'x only enters the trace.
    std::vector<double> Qw(k, 0.0), y(k, 0.0), Qy(k, 0.0), z(k), Qz(k);
    double fw = 0.0;
    double L = lipschitz_;
    double t = 1.0;
    bool momentum = false;
    if (objective_trace) objective_trace->push_back(half_xx);

    auto kkt_at = [&](std::span<const double> v, std::span<const double> Qv) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) worst = std::max(worst, std::abs(std::min(v[j], Qv[j] - b[j])));
        return worst;
    };

    result.kkt = kkt_at(w, Qw);
    if (result.kkt <= options_.tol) {
        result.converged = true;
        return result;
    }

    for (std::size_t it = 1; it <= options_.max_iter; ++it) {
        result.iterations = it;
        for (std::size_t j = 0; j < k; ++j) z[j] = std::max(0.0, y[j] - (Qy[j] - b[j]) / L);
        symmetric_times(gram_, z, Qz);
        const double fz = 0.5 * dot(z, Qz) - dot(b, z);
        if (!std::isfinite(fz)) throw std::overflow_error("NNLS iterate diverged");

        const double slack = 1e-12 * std::max({1.0, std::abs(fw), half_xx});
        if (fz > fw + slack) {
            if (momentum) {
                std::copy(w.begin(), w.end(), y.begin());
                std::copy(Qw.begin(), Qw.end(), Qy.begin());
                t = 1.0;
                momentum = false;
            } else {
                // A plain step went uphill: the eigenvalue estimate was low.
                L *= 2.0;
            }
            continue;
        }

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_next;
        for (std::size_t j = 0; j < k; ++j) {
            y[j] = z[j] + beta * (z[j] - w[j]);
            Qy[j] = Qz[j] + beta * (Qz[j] - Qw[j]);
        }
        std::copy(z.begin(), z.end(), w.begin());
        std::copy(Qz.begin(), Qz.end(), Qw.begin());
        fw = std::min(fz, fw);
        t = t_next;
        momentum = true;
        if (objective_trace) objective_trace->push_back(half_xx + fz);

        result.kkt = kkt_at(w, Qw);
        if (result.kkt <= options_.tol) {
            result.converged = true;
            break;
        }
    }
    return result;
}

NnlsSolution nnls_fit(const Matrix& X, const Matrix& H, double tol, std::size_t max_iter) {
    if (H.rows() == 0) throw ArgumentError("NNLS needs at least one archetype");
    if (X.cols() != H.cols()) throw ArgumentError("X and H have different column counts");

    const NnlsRowSolver solver(H, {tol, max_iter});
    NnlsSolution out;
    out.W = Matrix(X.rows(), H.rows());
    for (std::size_t j = 0; j < H.rows(); ++j) {
        const auto r = H.row(j);
        if (std::all_of(r.begin(), r.end(), [](double v) { return v == 0.0; })) out.zero_archetypes.push_back(j);
    }

    std::vector<NnlsRowSolver::RowResult> results(X.rows());
    constexpr std::size_t kChunk = 64;
    const std::size_t chunks = (X.rows() + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t end = std::min(X.rows(), (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) results[i] = solver.solve(X.row(i), out.W.row(i));
    });

    out.converged = true;
    for (const auto& r : results) {
        out.iterations = std::max(out.iterations, r.iterations);
        out.kkt = std::max(out.kkt, r.kkt);
        out.converged = out.converged && r.converged;
    }
    out.relative_residual = relative_frobenius_error(multiply(out.W, H), X);
    return out;
}

double kkt_residual(const Matrix& X, const Matrix& H, const Matrix& W) {
    if (X.rows() != W.rows() || X.cols() != H.cols() || W.cols() != H.rows())
        throw ArgumentError("kkt_residual: inconsistent shapes");
    const Matrix G = multiply_transposed(subtract(multiply(W, H), X), H);
    double worst = 0.0;
    for (std::size_t i = 0; i < W.size(); ++i)
        worst = std::max(worst, std::abs(std::min(W.values()[i], G.values()[i])));
    return worst;
}

double least_squares_objective(const Matrix& X, const Matrix& H, const Matrix& W) {
    const double r = frobenius_norm(subtract(X, multiply(W, H)));
    return 0.5 * r * r;
}

} // namespace archpursuit
