#include "archpursuit/distributed.hpp"

#include <algorithm>

#include "archpursuit/errors.hpp"
#include "archpursuit/nnls.hpp"
#include "archpursuit/parallel.hpp"

namespace archpursuit {

void Partition::validate(std::size_t n) const {
    if (assignment.empty()) throw ArgumentError("partition needs at least one worker");
    std::vector<char> seen(n, 0);
    std::size_t total = 0;
    for (const auto& block : assignment) {
        for (std::size_t r : block) {
            if (r >= n) throw ArgumentError("partition assigns a row outside the data");
            if (seen[r]) throw ArgumentError("partition assigns a row to two workers");
            seen[r] = 1;
        }
        total += block.size();
    }
    if (total != n) throw ArgumentError("partition does not cover every row");
}

Partition Partition::contiguous(std::size_t n, std::size_t workers) {
    if (workers == 0) throw ArgumentError("worker count must be at least 1");
    Partition part;
    part.assignment.resize(workers);
    const std::size_t base = n / workers;
    const std::size_t extra = n % workers;
    std::size_t next = 0;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t len = base + (w < extra ? 1 : 0);
        for (std::size_t i = 0; i < len; ++i) part.assignment[w].push_back(next++);
    }
    return part;
}

Partition Partition::round_robin(std::size_t n, std::size_t workers) {
    if (workers == 0) throw ArgumentError("worker count must be at least 1");
    Partition part;
    part.assignment.resize(workers);
    for (std::size_t i = 0; i < n; ++i) part.assignment[i % workers].push_back(i);
    return part;
}

std::size_t ExecutionTrace::bytes_sent(std::size_t worker, Phase phase) const {
    std::size_t total = 0;
    for (const auto& m : messages) {
        if (m.worker != worker || !m.to_coordinator) continue;
        const bool weights = m.kind == "weights" || m.kind == "archetype";
        if ((phase == Phase::weights) == weights) total += m.bytes;
    }
    return total;
}

std::size_t ExecutionTrace::rows_read(std::size_t worker, Phase phase) const {
    std::size_t total = 0;
    for (const auto& s : sweeps)
        if (s.worker == worker && s.phase == phase) total += s.rows_read;
    return total;
}

std::size_t count_passes(const ExecutionTrace& trace) {
    std::size_t passes = 0;
    for (std::size_t w = 0; w < trace.local_rows.size(); ++w) {
        if (trace.local_rows[w] == 0) continue;
        std::size_t full = 0;
        for (const auto& s : trace.sweeps)
            if (s.worker == w && s.rows_read == trace.local_rows[w]) ++full;
        passes = std::max(passes, full);
    }
    return passes;
}

namespace {

struct WorkerStore {
    Matrix rows;
    std::vector<std::int64_t> global;
};

std::vector<WorkerStore> scatter(const Matrix& X, const Partition& part, bool normalize) {
    std::vector<WorkerStore> stores(part.workers());
    for (std::size_t w = 0; w < part.workers(); ++w) {
        const auto& block = part.assignment[w];
        stores[w].rows = select_rows(X, block);
        if (normalize) stores[w].rows = normalize_rows(stores[w].rows);
        stores[w].global.assign(block.begin(), block.end());
    }
    return stores;
}

void start_trace(ExecutionTrace* trace, const Partition& part) {
    if (!trace) return;
    trace->local_rows.resize(part.workers());
    for (std::size_t w = 0; w < part.workers(); ++w) trace->local_rows[w] = part.assignment[w].size();
}

// One round: every worker sweeps its rows, the coordinator merges in worker order.
ExtremaSummary pursuit_round(const std::vector<WorkerStore>& stores, const FunctionalBank& bank, std::size_t first,
                             std::size_t count, std::size_t round, ExecutionTrace* trace) {
    std::vector<ExtremaSummary> summaries(stores.size());
    parallel_for(stores.size(), [&](std::size_t w) {
        summaries[w] = sweep_extrema(stores[w].rows, stores[w].global, bank, first, count);
    });
    ExtremaSummary merged(first, count);
    for (std::size_t w = 0; w < stores.size(); ++w) {
        merged.merge(summaries[w]);
        if (trace) {
            trace->sweeps.push_back({Phase::pursuit, w, round, stores[w].rows.rows()});
            trace->messages.push_back({w, true, "extrema", round, summary_bytes(count)});
        }
    }
    return merged;
}

void require_data(const Matrix& X, const Partition& part, const PursuitConfig& cfg) {
    cfg.validate();
    if (X.rows() == 0 || X.cols() == 0) throw ArgumentError("pursuit needs a non-empty matrix");
    part.validate(X.rows());
}

} // namespace

WorkerSummary worker_pursuit(const Matrix& local_rows, const std::vector<std::size_t>& global_rows,
                             std::size_t worker, const PursuitConfig& cfg, std::size_t first, std::size_t count) {
    const std::vector<std::int64_t> global(global_rows.begin(), global_rows.end());
    const Matrix normalized = cfg.normalize_rows ? normalize_rows(local_rows) : Matrix{};
    const Matrix& data = cfg.normalize_rows ? normalized : local_rows;
    return {worker, sweep_extrema(data, global, FunctionalBank(cfg.seed, local_rows.cols()), first, count)};
}

ExtremeSet run_distributed(const Matrix& X, const Partition& part, const PursuitConfig& cfg, ExecutionTrace* trace) {
    require_data(X, part, cfg);
    start_trace(trace, part);
    const auto stores = scatter(X, part, cfg.normalize_rows);
    const FunctionalBank bank(cfg.seed, X.cols());
    VoteTally tally(X.rows());
    tally.add(pursuit_round(stores, bank, 0, cfg.m, 0, trace));
    return tally.finish();
}

ExtremeSet run_distributed_adaptive(const Matrix& X, const Partition& part, const PursuitConfig& cfg,
                                    std::size_t rounds_patience, ExecutionTrace* trace) {
    require_data(X, part, cfg);
    if (rounds_patience < 1) throw ArgumentError("rounds_patience must be at least 1");
    start_trace(trace, part);
    const auto stores = scatter(X, part, cfg.normalize_rows);
    const FunctionalBank bank(cfg.seed, X.cols());
    VoteTally tally(X.rows());
    std::size_t rounds = 0;
    std::size_t idle = 0;
    while (rounds < cfg.max_rounds) {
        const std::size_t fresh = tally.add(pursuit_round(stores, bank, rounds * cfg.batch, cfg.batch, rounds, trace));
        ++rounds;
        idle = fresh == 0 ? idle + 1 : 0;
        if (idle >= rounds_patience || tally.distinct() == X.rows()) break;
    }
    return tally.finish(rounds);
}

Matrix distributed_weights(const Matrix& X, const Partition& part, const std::vector<std::size_t>& H_rows,
                           ExecutionTrace* trace, double tol, std::size_t max_iter) {
    if (H_rows.empty()) throw ArgumentError("distributed_weights needs at least one archetype row");
    part.validate(X.rows());
    for (std::size_t r : H_rows)
        if (r >= X.rows()) throw ArgumentError("archetype row outside the data");
    if (trace && trace->local_rows.empty()) start_trace(trace, part);

    // The owners ship the archetype rows; the coordinator broadcasts H.
    const Matrix H = select_rows(X, H_rows);
    const std::size_t row_bytes = X.cols() * 8;
    if (trace) {
        std::vector<std::size_t> owner(X.rows());
        for (std::size_t w = 0; w < part.workers(); ++w)
            for (std::size_t r : part.assignment[w]) owner[r] = w;
        for (std::size_t r : H_rows) trace->messages.push_back({owner[r], true, "archetype", 0, row_bytes});
        for (std::size_t w = 0; w < part.workers(); ++w)
            trace->messages.push_back({w, false, "broadcast", 0, H.size() * 8});
    }

    const NnlsRowSolver solver(H, {tol, max_iter});
    std::vector<Matrix> local_w(part.workers());
    parallel_for(part.workers(), [&](std::size_t w) {
        try {
            const Matrix local = select_rows(X, part.assignment[w]);
            Matrix W(local.rows(), H.rows());
            for (std::size_t i = 0; i < local.rows(); ++i) solver.solve(local.row(i), W.row(i));
            if (!all_finite(W)) throw std::runtime_error("non-finite weights");
            local_w[w] = std::move(W);
        } catch (const WorkerError&) {
            throw;
        } catch (const std::exception& e) {
            throw WorkerError("worker " + std::to_string(w) + ": " + e.what(), w);
        }
    });

    Matrix W(X.rows(), H.rows());
    for (std::size_t w = 0; w < part.workers(); ++w) {
        const auto& block = part.assignment[w];
        for (std::size_t i = 0; i < block.size(); ++i) std::ranges::copy(local_w[w].row(i), W.row(block[i]).begin());
        if (trace) {
            trace->sweeps.push_back({Phase::weights, w, 0, block.size()});
            trace->messages.push_back({w, true, "weights", 0, block.size() * H.rows() * 8});
        }
    }
    return W;
}

Matrix communication_table(const ExecutionTrace& trace) {
    const std::size_t D = trace.local_rows.size();
    Matrix out(D, 6);
    for (std::size_t w = 0; w < D; ++w) {
        out(w, 0) = static_cast<double>(w);
        out(w, 1) = static_cast<double>(trace.local_rows[w]);
        out(w, 2) = static_cast<double>(trace.rows_read(w, Phase::pursuit));
        out(w, 3) = static_cast<double>(trace.rows_read(w, Phase::weights));
        out(w, 4) = static_cast<double>(trace.bytes_sent(w, Phase::pursuit));
        out(w, 5) = static_cast<double>(trace.bytes_sent(w, Phase::weights));
    }
    return out;
}

} // namespace archpursuit
