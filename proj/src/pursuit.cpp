#include "archpursuit/pursuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "archpursuit/errors.hpp"
#include "archpursuit/simd/kernels.hpp"

namespace archpursuit {

namespace {

// Rows held in cache while all functionals stream past them.
constexpr std::size_t kRowBlock = 32;
constexpr std::size_t kFunctionalChunk = 64;

std::uint64_t functional_counter(std::size_t functional, std::size_t coord) {
    return (static_cast<std::uint64_t>(functional) << 32) | static_cast<std::uint64_t>(coord >> 1);
}

} // namespace

void PursuitConfig::validate() const {
    if (m < 1) throw ArgumentError("m must be at least 1");
    if (batch < 1) throw ArgumentError("batch must be at least 1");
    if (max_rounds < 1) throw ArgumentError("max_rounds must be at least 1");
}

FunctionalBank::FunctionalBank(std::uint64_t seed, std::size_t dim) noexcept
    : rng_(seed, Domain::functionals), dim_(dim) {}

double FunctionalBank::entry(std::size_t functional, std::size_t coord) const noexcept {
    const auto [z0, z1] = rng_.normal_pair(functional_counter(functional, coord));
    return (coord & 1) ? z1 : z0;
}

void FunctionalBank::fill(std::size_t first, std::size_t count, std::span<double> out) const {
    if (out.size() < count * dim_) throw ArgumentError("functional block buffer too small");
    for (std::size_t j = 0; j < count; ++j) {
        double* dst = out.data() + j * dim_;
        for (std::size_t c = 0; c < dim_; c += 2) {
            const auto [z0, z1] = rng_.normal_pair(functional_counter(first + j, c));
            dst[c] = z0;
            if (c + 1 < dim_) dst[c + 1] = z1;
        }
    }
}

ExtremaSummary::ExtremaSummary(std::size_t first, std::size_t count)
    : first_functional(first),
      max_value(count, -std::numeric_limits<double>::infinity()),
      max_index(count, -1),
      min_value(count, std::numeric_limits<double>::infinity()),
      min_index(count, -1) {}

void ExtremaSummary::merge(const ExtremaSummary& other) {
    if (other.first_functional != first_functional || other.size() != size())
        throw ArgumentError("cannot merge summaries over different functionals");
    for (std::size_t j = 0; j < size(); ++j) {
        if (other.max_index[j] >= 0 &&
            (max_index[j] < 0 || other.max_value[j] > max_value[j] ||
             (other.max_value[j] == max_value[j] && other.max_index[j] < max_index[j]))) {
            max_value[j] = other.max_value[j];
            max_index[j] = other.max_index[j];
        }
        if (other.min_index[j] >= 0 &&
            (min_index[j] < 0 || other.min_value[j] < min_value[j] ||
             (other.min_value[j] == min_value[j] && other.min_index[j] < min_index[j]))) {
            min_value[j] = other.min_value[j];
            min_index[j] = other.min_index[j];
        }
    }
}

ExtremaSummary sweep_extrema(const Matrix& rows, std::span<const std::int64_t> global_index,
                             const FunctionalBank& bank, std::size_t first, std::size_t count) {
    if (!global_index.empty() && global_index.size() != rows.rows())
        throw ArgumentError("global index map does not match the local row count");
    if (rows.rows() > 0 && rows.cols() != bank.dim())
        throw ArgumentError("functional dimension does not match the data");

    ExtremaSummary summary(first, count);
    if (rows.rows() == 0 || count == 0) return summary;

    const std::size_t p = bank.dim();
    std::vector<double> functionals(count * p);
    bank.fill(first, count, functionals);

    const auto& k = simd::kernels();
    std::vector<double> values(kFunctionalChunk);
    for (std::size_t r0 = 0; r0 < rows.rows(); r0 += kRowBlock) {
        const std::size_t r1 = std::min(rows.rows(), r0 + kRowBlock);
        for (std::size_t f0 = 0; f0 < count; f0 += kFunctionalChunk) {
            const std::size_t f1 = std::min(count, f0 + kFunctionalChunk);
            for (std::size_t r = r0; r < r1; ++r) {
                const double* x = rows.row(r).data();
                std::size_t f = f0;
                for (; f + 4 <= f1; f += 4) k.dot4(x, functionals.data() + f * p, p, p, values.data() + (f - f0));
                for (; f < f1; ++f) values[f - f0] = k.dot(x, functionals.data() + f * p, p);
                const std::int64_t id = global_index.empty() ? static_cast<std::int64_t>(r) : global_index[r];
                k.update_extrema(values.data(), f1 - f0, id, summary.max_value.data() + f0,
                                 summary.max_index.data() + f0, summary.min_value.data() + f0,
                                 summary.min_index.data() + f0);
            }
        }
    }
    return summary;
}

std::size_t ExtremeSet::votes_for(std::size_t row) const noexcept {
    const auto it = std::lower_bound(indices.begin(), indices.end(), row);
    if (it == indices.end() || *it != row) return 0;
    return votes[static_cast<std::size_t>(it - indices.begin())];
}

std::size_t ExtremeSet::total_votes() const noexcept {
    return std::accumulate(votes.begin(), votes.end(), std::size_t{0});
}

std::size_t VoteTally::add(const ExtremaSummary& summary) {
    std::size_t fresh = 0;
    auto bump = [&](std::int64_t idx) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= counts_.size())
            throw ArgumentError("extrema summary refers to a row outside the data");
        if (counts_[static_cast<std::size_t>(idx)]++ == 0) ++fresh;
    };
    for (std::size_t j = 0; j < summary.size(); ++j) {
        bump(summary.max_index[j]);
        bump(summary.min_index[j]);
    }
    functionals_ += summary.size();
    distinct_ += fresh;
    return fresh;
}

ExtremeSet VoteTally::finish(std::size_t rounds) const {
    ExtremeSet out;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] == 0) continue;
        out.indices.push_back(i);
        out.votes.push_back(counts_[i]);
    }
    out.functionals = functionals_;
    out.rounds = rounds;
    return out;
}

namespace {

void require_rows(const Matrix& X) {
    if (X.rows() == 0 || X.cols() == 0) throw ArgumentError("pursuit needs a non-empty matrix");
}

} // namespace

ExtremeSet pursue(const Matrix& X, const PursuitConfig& cfg) {
    cfg.validate();
    require_rows(X);
    const Matrix normalized = cfg.normalize_rows ? normalize_rows(X) : Matrix{};
    const Matrix& data = cfg.normalize_rows ? normalized : X;

    const FunctionalBank bank(cfg.seed, data.cols());
    VoteTally tally(data.rows());
    tally.add(sweep_extrema(data, {}, bank, 0, cfg.m));
    return tally.finish();
}

ExtremeSet pursue_adaptive(const Matrix& X, const PursuitConfig& cfg, std::size_t rounds_patience) {
    cfg.validate();
    require_rows(X);
    if (rounds_patience < 1) throw ArgumentError("rounds_patience must be at least 1");
    const Matrix normalized = cfg.normalize_rows ? normalize_rows(X) : Matrix{};
    const Matrix& data = cfg.normalize_rows ? normalized : X;

    const FunctionalBank bank(cfg.seed, data.cols());
    VoteTally tally(data.rows());
    std::size_t rounds = 0;
    std::size_t idle = 0;
    while (rounds < cfg.max_rounds) {
        const std::size_t fresh = tally.add(sweep_extrema(data, {}, bank, rounds * cfg.batch, cfg.batch));
        ++rounds;
        idle = fresh == 0 ? idle + 1 : 0;
        // Once every row is found no later round can add one.
        if (idle >= rounds_patience || tally.distinct() == data.rows()) break;
    }
    return tally.finish(rounds);
}

double posterior_missed_mass(std::size_t batch, double alpha) {
    if (batch < 1) throw ArgumentError("batch must be at least 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
    return std::log(1.0 / alpha) / (2.0 * static_cast<double>(batch));
}

TopVoted select_top_voted(const ExtremeSet& es, std::size_t k) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    std::vector<std::size_t> order(es.indices.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return es.votes[a] > es.votes[b]; // indices are ascending, so stability breaks ties by index
    });
    TopVoted out;
    out.underfull = order.size() < k;
    order.resize(std::min(k, order.size()));
    for (std::size_t pos : order) out.indices.push_back(es.indices[pos]);
    return out;
}

} // namespace archpursuit
