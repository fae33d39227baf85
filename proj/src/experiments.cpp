#include "archpursuit/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "archpursuit/errors.hpp"
#include "archpursuit/generators.hpp"
#include "archpursuit/glasso.hpp"
#include "archpursuit/io.hpp"
#include "archpursuit/nnls.hpp"
#include "archpursuit/parallel.hpp"
#include "archpursuit/rng.hpp"

namespace archpursuit {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ExtremeSet tally(std::size_t n_rows, const ExtremaSummary& s) {
    VoteTally t(n_rows);
    t.add(s);
    return t.finish();
}

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
    std::sort(v.begin(), v.end());
    return v;
}

} // namespace

GeneratorKind parse_generator(std::string_view name) {
    if (name == "uniform") return GeneratorKind::uniform;
    if (name == "hilbert") return GeneratorKind::hilbert;
    throw ArgumentError("unknown generator '" + std::string(name) + "' (uniform | hilbert)");
}

Selection parse_selection(std::string_view name) {
    if (name == "vote") return Selection::vote;
    if (name == "glasso") return Selection::glasso;
    throw ArgumentError("unknown selection '" + std::string(name) + "' (vote | glasso)");
}

std::size_t functionals_for(double c, std::size_t k) {
    if (!(c > 0.0)) throw ArgumentError("multiplier must be positive");
    if (k < 2) throw ArgumentError("k must be at least 2");
    const double kd = static_cast<double>(k);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c * kd * std::log(kd))));
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi > 0.0)) throw ArgumentError("log_space needs positive ends");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial) {
    const auto w = CounterRng(seed, Domain::trials, cell).block(trial);
    return (static_cast<std::uint64_t>(w[0]) << 32) | w[1];
}

ExtremaSummary summary_prefix(const ExtremaSummary& s, std::size_t m) {
    if (m > s.size()) throw ArgumentError("prefix longer than the summary");
    ExtremaSummary out(s.first_functional, m);
    std::copy_n(s.max_value.begin(), m, out.max_value.begin());
    std::copy_n(s.max_index.begin(), m, out.max_index.begin());
    std::copy_n(s.min_value.begin(), m, out.min_value.begin());
    std::copy_n(s.min_index.begin(), m, out.min_index.begin());
    return out;
}

void SweepSpec::validate() const {
    if (trials < 1) throw ArgumentError("trials must be at least 1");
    if (k_values.empty() || multipliers.empty()) throw ArgumentError("sweep needs k values and multipliers");
    for (std::size_t k : k_values) {
        if (k < 2) throw ArgumentError("every k must be at least 2");
        if (k > n || k > p) throw ArgumentError("k must not exceed n or p");
    }
    for (double c : multipliers)
        if (!(c > 0.0)) throw ArgumentError("multipliers must be positive");
}

RecoveryGrid run_sweep(const SweepSpec& spec) {
    spec.validate();
    RecoveryGrid grid;
    for (std::size_t k : spec.k_values) {
        std::vector<std::size_t> ms;
        for (double c : spec.multipliers) ms.push_back(functionals_for(c, k));
        const std::size_t m_max = *std::max_element(ms.begin(), ms.end());

        std::vector<std::vector<char>> ok(spec.trials, std::vector<char>(ms.size(), 0));
        parallel_for(spec.trials, [&](std::size_t t) {
            const std::uint64_t s = trial_seed(spec.seed, k, t);
            const auto inst = spec.generator == GeneratorKind::uniform ? gen_uniform_separable(spec.n, spec.p, k, s)
                                                                       : gen_hilbert_separable(spec.n, spec.p, k, s);
            const FunctionalBank bank(s, spec.p);
            const auto all = sweep_extrema(inst.X, {}, bank, 0, m_max);
            for (std::size_t j = 0; j < ms.size(); ++j)
                ok[t][j] = tally(spec.n, summary_prefix(all, ms[j])).indices == sorted(inst.true_extreme_indices);
        });

        Isocline iso;
        iso.k = k;
        iso.reference_m = static_cast<double>(k) * std::log(static_cast<double>(k));
        iso.c95 = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t j = 0; j < ms.size(); ++j) {
            SweepCell cell;
            cell.k = k;
            cell.c = spec.multipliers[j];
            cell.m = ms[j];
            cell.trials = spec.trials;
            for (const auto& row : ok) cell.successes += row[j] ? 1 : 0;
            cell.fraction = static_cast<double>(cell.successes) / static_cast<double>(spec.trials);
            if (cell.fraction >= 0.95 && (std::isnan(iso.c95) || cell.c < iso.c95)) {
                iso.c95 = cell.c;
                iso.m95 = cell.m;
            }
            grid.cells.push_back(cell);
        }
        grid.isoclines.push_back(iso);
    }
    return grid;
}

Matrix sweep_table(const RecoveryGrid& grid) {
    Matrix out(grid.cells.size(), 5);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const auto& c = grid.cells[i];
        out(i, 0) = static_cast<double>(c.k);
        out(i, 1) = c.c;
        out(i, 2) = static_cast<double>(c.m);
        out(i, 3) = static_cast<double>(c.trials);
        out(i, 4) = c.fraction;
    }
    return out;
}

Matrix isocline_table(const RecoveryGrid& grid) {
    Matrix out(grid.isoclines.size(), 4);
    for (std::size_t i = 0; i < grid.isoclines.size(); ++i) {
        const auto& c = grid.isoclines[i];
        out(i, 0) = static_cast<double>(c.k);
        out(i, 1) = c.reference_m;
        out(i, 2) = c.c95;
        out(i, 3) = static_cast<double>(c.m95);
    }
    return out;
}

void NoiseSpec::validate() const {
    if (k < 2) throw ArgumentError("k must be at least 2");
    if (p < 1) throw ArgumentError("p must be at least 1");
    if (trials < 1) throw ArgumentError("trials must be at least 1");
    if (select < 1) throw ArgumentError("select must be at least 1");
    if (m_multipliers.empty() || epsilons.empty()) throw ArgumentError("noise grid needs m values and epsilons");
    for (double c : m_multipliers)
        if (!(c > 0.0)) throw ArgumentError("multipliers must be positive");
    for (double e : epsilons)
        if (!(e >= 0.0) || !std::isfinite(e)) throw ArgumentError("epsilon must be finite and non-negative");
    if (lambda_count < 2) throw ArgumentError("lambda grid needs at least two points");
}

double residual_per_row(const Matrix& X, const Matrix& H, const Matrix& W) {
    return frobenius_norm(subtract(X, multiply(W, H))) / static_cast<double>(X.rows());
}

std::vector<std::size_t> glasso_select(const Matrix& X, std::span<const std::size_t> candidates, std::size_t k,
                                       double tol, std::size_t lambda_count) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    std::vector<std::size_t> rows(candidates.begin(), candidates.end());
    if (rows.size() <= k) return sorted(rows);
    GroupLassoProblem prob;
    prob.X = X;
    prob.H = select_rows(X, rows);
    const double lmax = lambda_max(prob.X, prob.H);
    if (!(lmax > 0.0)) { // nothing correlates: fall back to the first k candidates
        rows.resize(k);
        return rows;
    }
    prob.lambda_grid = default_lambda_grid(lmax, lambda_count);
    const auto pick = select_by_persistence(solve_path(prob, tol), k);
    std::vector<std::size_t> out;
    for (std::size_t g : pick.indices) out.push_back(rows[g]);
    return sorted(out);
}

NoiseGrid run_noise(const NoiseSpec& spec) {
    spec.validate();
    std::vector<std::size_t> ms;
    for (double c : spec.m_multipliers) ms.push_back(functionals_for(c, spec.k));
    const std::size_t m_max = *std::max_element(ms.begin(), ms.end());
    const std::size_t E = spec.epsilons.size();

    // residual[e][t][j]
    std::vector<std::vector<std::vector<double>>> residual(
        E, std::vector<std::vector<double>>(spec.trials, std::vector<double>(ms.size(), 0.0)));
    parallel_for(E * spec.trials, [&](std::size_t task) {
        const std::size_t e = task / spec.trials, t = task % spec.trials;
        const auto inst = make_noisy_pairs(spec.p, spec.k, spec.epsilons[e], trial_seed(spec.seed, 0, t));
        const FunctionalBank bank(trial_seed(spec.seed, 1, t), spec.p);
        const auto all = sweep_extrema(inst.X, {}, bank, 0, m_max);
        for (std::size_t j = 0; j < ms.size(); ++j) {
            const auto es = tally(inst.X.rows(), summary_prefix(all, ms[j]));
            const auto rows = spec.selection == Selection::vote
                                  ? select_top_voted(es, spec.select).indices
                                  : glasso_select(inst.X, es.indices, spec.select, spec.glasso_tol, spec.lambda_count);
            const Matrix H = select_rows(inst.X, rows);
            const auto fit = nnls_fit(inst.X, H);
            residual[e][t][j] = residual_per_row(inst.X, H, fit.W);
        }
    });

    NoiseGrid grid;
    for (std::size_t j = 0; j < ms.size(); ++j)
        for (std::size_t e = 0; e < E; ++e) {
            double sum = 0.0;
            for (std::size_t t = 0; t < spec.trials; ++t) sum += residual[e][t][j];
            grid.cells.push_back({ms[j], spec.epsilons[e], sum / static_cast<double>(spec.trials)});
        }
    return grid;
}

Matrix noise_table(const NoiseGrid& grid) {
    Matrix out(grid.cells.size(), 4);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        const auto& c = grid.cells[i];
        out(i, 0) = static_cast<double>(c.m);
        out(i, 1) = c.epsilon;
        out(i, 2) = c.mean_residual;
        // log10(0) would not round-trip; clamp at the smallest normal double.
        out(i, 3) = std::log10(std::max(c.mean_residual, std::numeric_limits<double>::min()));
    }
    return out;
}

Matrix scree(const Matrix& X, std::size_t m, std::size_t repeats, std::uint64_t seed) {
    if (X.rows() == 0) throw ArgumentError("scree needs a non-empty matrix");
    if (m == 0 || repeats == 0) throw ArgumentError("m and repeats must be at least 1");
    Matrix out(repeats, X.rows());
    parallel_for(repeats, [&](std::size_t r) {
        PursuitConfig cfg;
        cfg.m = m;
        cfg.seed = trial_seed(seed, 2, r);
        const auto es = pursue(X, cfg);
        std::vector<double> v(X.rows(), 0.0);
        for (std::size_t i = 0; i < es.indices.size(); ++i) v[i] = static_cast<double>(es.votes[i]);
        std::sort(v.begin(), v.end(), std::greater<>());
        for (std::size_t c = 0; c < v.size(); ++c) out(r, c) = v[c] / v[0];
    });
    return out;
}

std::vector<std::size_t> classify(const Matrix& X, const Matrix& H) {
    if (H.rows() == 0) throw ArgumentError("classify needs at least one archetype");
    if (H.cols() != X.cols()) throw ArgumentError("archetypes and data differ in dimension");
    std::vector<std::size_t> label(X.rows(), 0);
    parallel_for(X.rows(), [&](std::size_t i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < H.rows(); ++a) {
            double sq = 0.0;
            for (std::size_t c = 0; c < X.cols(); ++c) {
                const double d = X(i, c) - H(a, c);
                sq += d * d;
            }
            if (sq < best) {
                best = sq;
                label[i] = a;
            }
        }
    });
    return label;
}

void FactorizeOptions::validate() const {
    if (m == 0) throw ArgumentError("m must be at least 1");
    if (workers == 0) throw ArgumentError("workers must be at least 1");
    if (patience == 0) throw ArgumentError("patience must be at least 1");
    if (selection == Selection::glasso && k == 0) throw ArgumentError("glasso selection needs k");
}

FactorizeResult factorize(const Matrix& X, const FactorizeOptions& options) {
    options.validate();
    if (X.rows() == 0 || X.cols() == 0) throw ArgumentError("factorize needs a non-empty matrix");
    FactorizeResult res;
    const auto part = Partition::contiguous(X.rows(), options.workers);

    PursuitConfig cfg;
    cfg.seed = options.seed;
    cfg.normalize_rows = options.normalize;
    auto start = std::chrono::steady_clock::now();
    if (options.adaptive) {
        cfg.batch = options.m;
        res.found = run_distributed_adaptive(X, part, cfg, options.patience, &res.trace);
    } else {
        cfg.m = options.m;
        res.found = run_distributed(X, part, cfg, &res.trace);
    }
    res.pursuit_seconds = seconds_since(start);

    start = std::chrono::steady_clock::now();
    if (options.k == 0) {
        res.indices = res.found.indices;
    } else if (options.selection == Selection::vote) {
        const auto top = select_top_voted(res.found, options.k);
        res.indices = sorted(top.indices);
        res.underfull = top.underfull;
    } else {
        res.indices = glasso_select(X, res.found.indices, options.k);
        res.underfull = res.found.indices.size() < options.k;
    }
    res.selection_seconds = seconds_since(start);

    start = std::chrono::steady_clock::now();
    res.W = distributed_weights(X, part, res.indices, &res.trace, options.nnls_tol, options.nnls_max_iter);
    res.weights_seconds = seconds_since(start);

    const Matrix H = select_rows(X, res.indices);
    res.relative_residual = relative_frobenius_error(multiply(res.W, H), X);
    res.residual_per_row = residual_per_row(X, H, res.W);
    res.passes = count_passes(res.trace);
    return res;
}

void write_factorization(const FactorizeResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    Matrix idx(result.indices.size(), 2);
    for (std::size_t i = 0; i < result.indices.size(); ++i) {
        idx(i, 0) = static_cast<double>(result.indices[i]);
        idx(i, 1) = static_cast<double>(result.found.votes_for(result.indices[i]));
    }
    save_csv(idx, dir / "indices.csv", {"row", "votes"});
    save_csv(result.W, dir / "W.csv");
    const Matrix summary(1, 9,
                         {result.relative_residual, result.residual_per_row, static_cast<double>(result.passes),
                          static_cast<double>(result.found.indices.size()), static_cast<double>(result.indices.size()),
                          result.underfull ? 1.0 : 0.0, result.pursuit_seconds, result.selection_seconds,
                          result.weights_seconds});
    save_csv(summary, dir / "summary.csv",
             {"relative_residual", "residual_per_row", "passes", "found", "selected", "underfull", "pursuit_seconds",
              "selection_seconds", "weights_seconds"});
    save_csv(communication_table(result.trace), dir / "comm.csv",
             {"worker", "local_rows", "pursuit_rows_read", "weights_rows_read", "pursuit_bytes", "weights_bytes"});
}

} // namespace archpursuit
