// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "archpursuit/distributed.hpp"
#include "archpursuit/experiments.hpp"
#include "archpursuit/generators.hpp"
#include "archpursuit/geometry.hpp"
#include "archpursuit/glasso.hpp"
#include "archpursuit/nnls.hpp"
#include "archpursuit/polytopes.hpp"
#include "archpursuit/pursuit.hpp"
#include "oracles/cone_projection.hpp"

using namespace archpursuit;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

double binomial_sigma(double p, std::size_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

double recovery(GeneratorKind gen, double c, std::size_t trials) {
    SweepSpec spec;
    spec.k_values = {20};
    spec.multipliers = {c};
    spec.trials = trials;
    spec.n = 500;
    spec.p = 1000;
    spec.generator = gen;
    spec.seed = 2024;
    return run_sweep(spec).cells[0].fraction;
}

Outcome c1_uniform_sweep() {
    const std::size_t trials = 200;
    const double f = recovery(GeneratorKind::uniform, 3.0, trials);
    const double floor = 0.95 - 2 * binomial_sigma(0.95, trials);
    return {f >= floor, fmt("k=20 m=%zu recovery %.3f over %zu trials (floor %.3f)", functionals_for(3, 20), f,
                            trials, floor)};
}

Outcome c2_hilbert_sweep() {
    const std::size_t trials = 200;
    const double f = recovery(GeneratorKind::hilbert, 12.0, trials);
    return {f >= 0.85, fmt("k=20 m=%zu recovery %.3f over %zu trials (floor 0.90 - 0.05)", functionals_for(12, 20), f,
                           trials)};
}

Outcome c3_theorem_validity() {
    const double delta = 0.05;
    const std::size_t trials = 10000;
    const double ceiling = delta + 3 * binomial_sigma(delta, trials);
    std::vector<Polytope> shapes{regular_polygon(4), regular_simplex(3), regular_simplex(5), regular_simplex(10)};
    bool ok = true;
    std::string detail;
    for (const auto& P : shapes) {
        const auto pred = required_m(P.exact_omega, P.size(), delta);
        const double bound = miss_probability_bound(P.exact_omega, pred.m);
        std::size_t misses = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            PursuitConfig cfg;
            cfg.m = pred.m;
            cfg.seed = trial_seed(3, P.size(), t);
            if (pursue(P.vertices, cfg).indices.size() != P.size()) ++misses;
        }
        const double rate = static_cast<double>(misses) / trials;
        ok = ok && rate <= ceiling && bound <= delta;
        detail += fmt("%s m=%zu miss %.4f bound %.4f; ", P.name.c_str(), pred.m, rate, bound);
    }
    detail += fmt("ceiling %.4f", ceiling);
    return {ok, detail};
}

Outcome c4_solid_angles() {
    std::vector<Polytope> shapes{regular_polygon(4), regular_simplex(3), regular_simplex(5), regular_simplex(10)};
    bool ok = true;
    double worst_z = 0, worst_total_z = 0;
    for (const auto& P : shapes) {
        const auto est = estimate_solid_angles(P.vertices, iota_indices(P.size()), 100000, 4);
        for (std::size_t i = 0; i < P.size(); ++i)
            worst_z = std::max(worst_z, std::abs(est.omega[i] - P.exact_omega[i]) / est.std_error[i]);
        worst_total_z = std::max(worst_total_z, std::abs(est.total - 1.0) / std::max(est.total_std_error, 1e-5));
        ok = ok && std::abs(est.total - 1.0) <= 3 * std::max(est.total_std_error, 1e-5);
    }
    ok = ok && worst_z <= 3.0;
    return {ok, fmt("largest |omega - exact| = %.2f s.e.; largest |sum - 1| = %.2f s.e.", worst_z, worst_total_z)};
}

double grid_segment_distance(double qx, double qy, double ax, double ay, double bx, double by) {
    double best = INFINITY;
    for (int s = 0; s <= 10000; ++s) {
        const double t = s * 1e-4;
        best = std::min(best, std::hypot(ax + t * (bx - ax) - qx, ay + t * (by - ay) - qy));
    }
    return best;
}

Outcome c5_simplicial_constant() {
    const Matrix basis = Matrix::identity(3);
    const double a = simplicial_constant(basis, iota_indices(3), 0);
    const double basis_err = std::abs(a - std::sqrt(1.5));

    std::mt19937_64 gen(55);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    double worst = 0;
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> th(10);
        for (double& t : th) t = angle(gen);
        Matrix X(10, 2);
        for (std::size_t i = 0; i < 10; ++i) {
            X(i, 0) = std::cos(th[i]);
            X(i, 1) = std::sin(th[i]);
        }
        for (std::size_t i = 0; i < 10; ++i) {
            double oracle = INFINITY;
            for (std::size_t u = 0; u < 10; ++u)
                for (std::size_t v = u + 1; v < 10; ++v)
                    if (u != i && v != i)
                        oracle = std::min(oracle,
                                          grid_segment_distance(X(i, 0), X(i, 1), X(u, 0), X(u, 1), X(v, 0), X(v, 1)));
            worst = std::max(worst, std::abs(simplicial_constant(X, iota_indices(10), i) - oracle));
        }
    }
    return {basis_err <= 1e-6 && worst <= 1e-3,
            fmt("basis alpha %.9f (error %.1e); polygon grid-oracle gap %.1e", a, basis_err, worst)};
}

Outcome c6_projection() {
    std::mt19937_64 gen(66);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif(0, 1);
    double worst_oracle = 0, worst_cert = 0;
    for (std::size_t q : {2u, 3u, 5u, 10u}) {
        for (int trial = 0; trial < 1000; ++trial) {
            std::vector<double> x(q);
            for (double& v : x) v = 2.0 * normal(gen);
            const auto y = project_cone_orthant(x);
            const auto ref = oracle::oracle_projection(x);
            for (std::size_t i = 0; i < q; ++i) worst_oracle = std::max(worst_oracle, std::abs(y[i] - ref[i]));

            // membership
            for (double v : y) worst_cert = std::max(worst_cert, -v);
            worst_cert = std::max(worst_cert, oracle::norm_head(y) - y[q - 1]);
            // orthogonality
            double ortho = 0;
            for (std::size_t i = 0; i < q; ++i) ortho += y[i] * (x[i] - y[i]);
            worst_cert = std::max(worst_cert, std::abs(ortho));
            // x - y lies in the polar cone: non-positive against sampled cone members
            for (int s = 0; s < 10; ++s) {
                std::vector<double> z(q);
                for (std::size_t i = 0; i + 1 < q; ++i) z[i] = unif(gen);
                z[q - 1] = oracle::norm_head(z) * (1 + unif(gen));
                double dual = 0;
                for (std::size_t i = 0; i < q; ++i) dual += (x[i] - y[i]) * z[i];
                worst_cert = std::max(worst_cert, dual);
            }
        }
    }
    return {worst_oracle <= 1e-6 && worst_cert <= 1e-9,
            fmt("4000 points, oracle gap %.1e, worst certificate violation %.1e", worst_oracle, worst_cert)};
}

Outcome c7_nnls() {
    bool ok = true;
    double worst_res = 0, worst_kkt = 0;
    std::size_t worst_it = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = gen_uniform_separable(500, 1000, 20, seed);
        const Matrix H = select_rows(inst.X, inst.true_extreme_indices);
        const auto fit = nnls_fit(inst.X, H, 1e-8, 5000);
        worst_res = std::max(worst_res, fit.relative_residual);
        worst_kkt = std::max(worst_kkt, fit.kkt);
        worst_it = std::max(worst_it, fit.iterations);
        ok = ok && fit.converged;
    }
    ok = ok && worst_res <= 1e-6 && worst_kkt <= 1e-8 && worst_it <= 5000;
    return {ok, fmt("3 instances 500x1000 k=20: residual %.1e, KKT %.1e, iterations %zu", worst_res, worst_kkt,
                    worst_it)};
}

Outcome c8_distributed() {
    std::mt19937_64 gen(88);
    bool identical = true, passes_ok = true;
    std::size_t runs = 0;
    for (int pair = 0; pair < 20; ++pair) {
        const std::size_t n = 20 + gen() % 200, p = 3 + gen() % 40;
        const std::size_t k = 2 + gen() % std::min<std::size_t>(10, p - 1);
        const auto inst = gen_uniform_separable(n, p, k, gen());
        PursuitConfig cfg;
        cfg.m = 10 + gen() % 200;
        cfg.seed = gen();
        const auto serial = pursue(inst.X, cfg);
        for (std::size_t D : {1u, 2u, 4u, 8u}) {
            for (const auto& part : {Partition::contiguous(n, D), Partition::round_robin(n, D)}) {
                ExecutionTrace trace;
                const auto dist = run_distributed(inst.X, part, cfg, &trace);
                identical = identical && dist.indices == serial.indices && dist.votes == serial.votes;
                passes_ok = passes_ok && count_passes(trace) == 1;
                distributed_weights(inst.X, part, inst.true_extreme_indices, &trace);
                passes_ok = passes_ok && count_passes(trace) == 2;
                ++runs;
            }
        }
    }
    return {identical && passes_ok, fmt("%zu runs: bit-identical %s, passes 1 then 2 %s", runs,
                                        identical ? "yes" : "no", passes_ok ? "yes" : "no")};
}

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order = iota_indices(v.size());
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        for (std::size_t t = i; t <= j; ++t) r[order[t]] = 0.5 * static_cast<double>(i + j);
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    const auto ra = ranks(a), rb = ranks(b);
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - ma) * (rb[i] - mb);
        saa += (ra[i] - ma) * (ra[i] - ma);
        sbb += (rb[i] - mb) * (rb[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

Outcome c9_noise_monotone() {
    NoiseSpec spec; // k=20, p=1000, 10 epsilons in [1e-4, 1e-1], 50 trials
    spec.m_multipliers = {1, 2, 5, 10, 20};
    spec.seed = 9;
    const auto grid = run_noise(spec);
    const std::size_t E = spec.epsilons.size();
    double worst = 1.0;
    std::string cols;
    for (std::size_t j = 0; j < spec.m_multipliers.size(); ++j) {
        std::vector<double> res;
        for (std::size_t e = 0; e < E; ++e) res.push_back(grid.cells[j * E + e].mean_residual);
        const double rho = spearman(spec.epsilons, res);
        worst = std::min(worst, rho);
        cols += fmt("m=%zu rho=%.3f; ", grid.cells[j * E].m, rho);
    }
    return {worst >= 0.95, cols + fmt("smallest %.3f", worst)};
}

Outcome c10_glasso_endpoints() {
    // Endpoints on exact separable instances with interior candidates.
    bool zero_ok = true;
    double worst_fit_gap = 0, worst_full_gap = 0;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto inst = gen_uniform_separable(60, 30, 6, seed);
        std::vector<std::size_t> rows = inst.true_extreme_indices;
        rows.push_back(10);
        rows.push_back(20);
        const Matrix cand = select_rows(inst.X, rows);
        const double lmax = lambda_max(inst.X, cand);
        const auto above = solve_path({inst.X, cand, {2 * lmax, lmax}});
        for (const auto& pt : above.points)
            zero_ok = zero_ok && std::all_of(pt.W.values().begin(), pt.W.values().end(), [](double v) { return v == 0; });
        const auto path = solve_path({inst.X, cand, default_lambda_grid(lmax)});
        const auto nn = nnls_fit(inst.X, cand, 1e-12, 20000);
        const double f_nnls = least_squares_objective(inst.X, cand, nn.W);
        const double scale = 0.5 * std::pow(frobenius_norm(inst.X), 2);
        const auto& end = path.points.back();
        worst_fit_gap = std::max(worst_fit_gap, std::abs(end.data_fit - f_nnls) / scale);
        worst_full_gap = std::max(worst_full_gap, std::abs(end.objective - f_nnls) / scale);
    }

    std::size_t ordered = 0;
    const std::size_t trials = 50;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const auto inst = gen_uniform_separable(80, 40, 8, 1000 + t);
        std::vector<std::size_t> rows = inst.true_extreme_indices;
        for (std::size_t r : {9u, 15u, 30u, 44u, 70u}) rows.push_back(r);
        const Matrix cand = select_rows(inst.X, rows);
        const auto per = persistence(solve_path({inst.X, cand, default_lambda_grid(lambda_max(inst.X, cand))}));
        const double weakest_true = *std::min_element(per.begin(), per.begin() + 8);
        const double strongest_interior = *std::max_element(per.begin() + 8, per.end());
        if (weakest_true > strongest_interior) ++ordered;
    }
    const double frac = static_cast<double>(ordered) / trials;
    return {zero_ok && worst_fit_gap <= 1e-4 && frac >= 0.9,
            fmt("W=0 above lambda_max %s; data-fit gap %.1e (full objective gap %.1e, penalty included); "
                "persistence ordering %.2f",
                zero_ok ? "yes" : "no", worst_fit_gap, worst_full_gap, frac)};
}

Outcome c11_scree() {
    const std::size_t k = 20, repeats = 20;
    double worst = INFINITY;
    for (double eps : {0.0, 1e-4, 1e-3}) {
        const auto inst = make_noisy_pairs(1000, k, eps, 11);
        const Matrix S = scree(inst.X, functionals_for(20, k), repeats, 11);
        for (std::size_t r = 0; r < repeats; ++r)
            worst = std::min(worst, S(r, k) > 0 ? S(r, k - 1) / S(r, k) : INFINITY);
    }
    return {worst >= 10.0, fmt("smallest rank-20 / rank-21 vote ratio over 60 runs: %g", worst)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 uniform exact-recovery sweep", c1_uniform_sweep},
        {"2 hilbert exact-recovery sweep", c2_hilbert_sweep},
        {"3 predicted m meets the miss rate", c3_theorem_validity},
        {"4 solid-angle consistency", c4_solid_angles},
        {"5 simplicial constant", c5_simplicial_constant},
        {"6 cone-orthant projection", c6_projection},
        {"7 NNLS on separable instances", c7_nnls},
        {"8 distributed equivalence and passes", c8_distributed},
        {"9 noise monotonicity", c9_noise_monotone},
        {"10 group-lasso endpoints and persistence", c10_glasso_endpoints},
        {"11 scree sharpness", c11_scree},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s criterion %s: %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    }
    return failures;
}
