#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "archpursuit/distributed.hpp"
#include "archpursuit/matrix.hpp"
#include "archpursuit/pursuit.hpp"

namespace archpursuit {

enum class GeneratorKind { uniform, hilbert };
enum class Selection { vote, glasso };

GeneratorKind parse_generator(std::string_view name);
Selection parse_selection(std::string_view name);

/// ceil(c k ln k), at least 1.
std::size_t functionals_for(double c, std::size_t k);

/// `count` values log-spaced from lo to hi inclusive.
std::vector<double> log_space(double lo, double hi, std::size_t count);

/// Seed of trial `trial` in experiment cell `cell`; distinct cells and trials get unrelated seeds.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t cell, std::uint64_t trial);

/// The first m functionals of a summary.
ExtremaSummary summary_prefix(const ExtremaSummary& s, std::size_t m);

struct SweepSpec {
    std::vector<std::size_t> k_values{5, 10, 20, 40};
    std::vector<double> multipliers{0.5, 1, 2, 3, 5, 10, 12};
    std::size_t trials = 100;
    std::size_t n = 500;
    std::size_t p = 1000;
    GeneratorKind generator = GeneratorKind::uniform;
    std::uint64_t seed = 0;
    void validate() const;
};

struct SweepCell {
    std::size_t k = 0;
    double c = 0;
    std::size_t m = 0;
    std::size_t trials = 0;
    std::size_t successes = 0;
    double fraction = 0;
};

struct Isocline {
    std::size_t k = 0;
    double reference_m = 0; ///< k ln k, the m/k = log k line
    double c95 = 0;         ///< smallest multiplier reaching 0.95; NaN if none
    std::size_t m95 = 0;    ///< its m; 0 if none
};

struct RecoveryGrid {
    std::vector<SweepCell> cells; ///< k-major, multipliers in the given order
    std::vector<Isocline> isoclines;
};

/// Exact recovery: the rows found by pursuit are exactly the true extreme rows.
/// Trial t of a given k uses one instance and one functional bank for every
/// multiplier, so recovery is monotone in c within a trial.
RecoveryGrid run_sweep(const SweepSpec& spec);
/// Rows (k, c, m, trials, fraction).
Matrix sweep_table(const RecoveryGrid& grid);
/// Rows (k, reference_m, c95, m95).
Matrix isocline_table(const RecoveryGrid& grid);

struct NoiseSpec {
    std::size_t k = 20;
    std::size_t p = 1000;
    std::vector<double> m_multipliers{1, 2, 5, 10, 20};
    std::vector<double> epsilons = log_space(1e-4, 1e-1, 10);
    std::size_t trials = 50;
    std::size_t select = 20;
    Selection selection = Selection::vote;
    std::uint64_t seed = 0;
    double glasso_tol = 1e-8;
    std::size_t lambda_count = 50;
    void validate() const;
};

struct NoiseCell {
    std::size_t m = 0;
    double epsilon = 0;
    double mean_residual = 0; ///< mean over trials of ||X - W H||_F / n
};

struct NoiseGrid {
    std::vector<NoiseCell> cells; ///< m-major, epsilons in the given order
};

/// Trial t draws one noise pattern shared by every epsilon and one functional
/// bank shared by every m.
NoiseGrid run_noise(const NoiseSpec& spec);
/// Rows (m, epsilon, mean_residual, log10_mean_residual).
Matrix noise_table(const NoiseGrid& grid);

/// ||X - W H||_F / n.
double residual_per_row(const Matrix& X, const Matrix& H, const Matrix& W);

/// Rows of `candidates` chosen by group-lasso persistence over a default lambda grid.
std::vector<std::size_t> glasso_select(const Matrix& X, std::span<const std::size_t> candidates, std::size_t k,
                                       double tol = 1e-8, std::size_t lambda_count = 50);

/// One row per repeat: vote counts sorted descending, divided by the largest.
/// Rows never found contribute zeros.
Matrix scree(const Matrix& X, std::size_t m, std::size_t repeats, std::uint64_t seed);

/// Nearest row of H in Euclidean distance; ties go to the lower row of H.
std::vector<std::size_t> classify(const Matrix& X, const Matrix& H);

struct FactorizeOptions {
    std::size_t m = 100;        ///< functionals, or the batch size when adaptive
    bool adaptive = false;
    std::size_t patience = 1;
    Selection selection = Selection::vote;
    std::size_t k = 0;          ///< rows to keep; 0 keeps every found row (vote only)
    std::size_t workers = 1;
    bool normalize = false;
    std::uint64_t seed = 0;
    double nnls_tol = 1e-8;
    std::size_t nnls_max_iter = 5000;
    void validate() const;
};

struct FactorizeResult {
    ExtremeSet found;
    std::vector<std::size_t> indices; ///< ascending
    bool underfull = false;
    Matrix W;
    double relative_residual = 0;
    double residual_per_row = 0;
    std::size_t passes = 0;
    double pursuit_seconds = 0;
    double selection_seconds = 0;
    double weights_seconds = 0;
    ExecutionTrace trace;
};

/// Pursuit over a contiguous partition, selection, then the distributed NNLS pass.
FactorizeResult factorize(const Matrix& X, const FactorizeOptions& options);
/// indices.csv, W.csv, summary.csv and comm.csv in `dir`.
void write_factorization(const FactorizeResult& result, const std::filesystem::path& dir);

} // namespace archpursuit
