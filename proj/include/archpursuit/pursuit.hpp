#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "archpursuit/matrix.hpp"
#include "archpursuit/rng.hpp"

namespace archpursuit {

struct PursuitConfig {
    std::size_t m = 100;         ///< random linear functionals (fixed-m pursuit)
    std::uint64_t seed = 0;
    std::size_t batch = 100;     ///< functionals per round (adaptive pursuit)
    bool normalize_rows = false; ///< scale rows to unit l2 norm first
    std::size_t max_rounds = 100000;

    void validate() const;
};

/// Standard-normal functionals g_j in R^dim. Entry (j, c) is a pure function of
/// (seed, j, c), so any worker regenerates the same functional independently.
class FunctionalBank {
public:
    FunctionalBank(std::uint64_t seed, std::size_t dim) noexcept;

    std::size_t dim() const noexcept { return dim_; }
    double entry(std::size_t functional, std::size_t coord) const noexcept;
    /// Functionals [first, first + count) written as rows of a count x dim block.
    void fill(std::size_t first, std::size_t count, std::span<double> out) const;

private:
    CounterRng rng_;
    std::size_t dim_;
};

/// Per-functional arg-max and arg-min over some set of rows. Index -1 marks
/// "no rows seen". Ties resolve to the lowest row index.
struct ExtremaSummary {
    std::size_t first_functional = 0;
    std::vector<double> max_value;
    std::vector<std::int64_t> max_index;
    std::vector<double> min_value;
    std::vector<std::int64_t> min_index;

    ExtremaSummary() = default;
    ExtremaSummary(std::size_t first, std::size_t count);

    std::size_t size() const noexcept { return max_value.size(); }
    /// Exact, associative and commutative. Throws ArgumentError on mismatched functional ranges.
    void merge(const ExtremaSummary& other);

    bool operator==(const ExtremaSummary&) const = default;
};

/// Evaluates functionals [first, first + count) on every row of `rows` in a
/// single sweep over the data. `global_index[r]` names row r in the full data
/// set; an empty span means rows are numbered 0..rows-1.
ExtremaSummary sweep_extrema(const Matrix& rows, std::span<const std::int64_t> global_index,
                             const FunctionalBank& bank, std::size_t first, std::size_t count);

/// Rows found as the max or min of some functional, with vote counts.
struct ExtremeSet {
    std::vector<std::size_t> indices; ///< ascending, distinct
    std::vector<std::size_t> votes;   ///< votes[i] belongs to indices[i]; each >= 1
    std::size_t functionals = 0;      ///< votes sum to 2 * functionals
    std::size_t rounds = 1;

    std::size_t votes_for(std::size_t row) const noexcept;
    std::size_t total_votes() const noexcept;

    bool operator==(const ExtremeSet&) const = default;
};

/// Accumulates one max vote and one min vote per functional.
class VoteTally {
public:
    explicit VoteTally(std::size_t n_rows) : counts_(n_rows, 0) {}

    /// Returns the number of rows that received their first vote.
    std::size_t add(const ExtremaSummary& summary);
    ExtremeSet finish(std::size_t rounds = 1) const;
    std::size_t distinct() const noexcept { return distinct_; }

private:
    std::vector<std::size_t> counts_;
    std::size_t functionals_ = 0;
    std::size_t distinct_ = 0;
};

/// Fixed-m pursuit: the rows attaining the max and the min of m random
/// Gaussian functionals. Throws ArgumentError on an empty matrix.
ExtremeSet pursue(const Matrix& X, const PursuitConfig& cfg);

/// Adaptive pursuit: rounds of cfg.batch fresh functionals until
/// `rounds_patience` consecutive rounds add no new row, every row has been
/// found, or cfg.max_rounds is reached. Votes from all rounds are tallied.
ExtremeSet pursue_adaptive(const Matrix& X, const PursuitConfig& cfg, std::size_t rounds_patience = 1);

/// Upper confidence bound, at level 1 - alpha, on the total solid angle of the
/// extreme points still missing after a round of `batch` functionals found nothing new.
double posterior_missed_mass(std::size_t batch, double alpha);

struct TopVoted {
    std::vector<std::size_t> indices;
    bool underfull = false; ///< fewer than k candidates existed
};

/// The k most voted rows, ties broken by ascending row index.
TopVoted select_top_voted(const ExtremeSet& es, std::size_t k);

} // namespace archpursuit
