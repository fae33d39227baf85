#pragma once

// In-process simulation of row-partitioned pursuit. Workers share only a seed;
// each regenerates the functionals, sweeps its own rows once and ships one
// ExtremaSummary to the coordinator. Every row access and message is recorded
// so the pass and communication structure can be asserted.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "archpursuit/matrix.hpp"
#include "archpursuit/pursuit.hpp"

namespace archpursuit {

struct Partition {
    std::vector<std::vector<std::size_t>> assignment; ///< worker -> global row indices

    std::size_t workers() const noexcept { return assignment.size(); }
    /// Throws ArgumentError unless the blocks are disjoint and cover [0, n).
    void validate(std::size_t n) const;

    /// D nearly equal contiguous blocks; trailing workers may be empty when D > n.
    static Partition contiguous(std::size_t n, std::size_t workers);
    /// Row i goes to worker i mod D.
    static Partition round_robin(std::size_t n, std::size_t workers);
};

struct WorkerSummary {
    std::size_t worker = 0;
    ExtremaSummary extrema;
};

enum class Phase { pursuit, weights };

struct Message {
    std::size_t worker = 0;  ///< the worker end of the exchange
    bool to_coordinator = true;
    std::string kind;        ///< "extrema", "archetype", "broadcast", "weights"
    std::size_t round = 0;
    std::size_t bytes = 0;
};

/// One sweep of a worker over its local rows.
struct SweepRecord {
    Phase phase = Phase::pursuit;
    std::size_t worker = 0;
    std::size_t round = 0;
    std::size_t rows_read = 0;
};

struct ExecutionTrace {
    std::vector<std::size_t> local_rows; ///< per worker
    std::vector<SweepRecord> sweeps;
    std::vector<Message> messages;

    std::size_t bytes_sent(std::size_t worker, Phase phase) const;
    std::size_t rows_read(std::size_t worker, Phase phase) const;
};

/// Bytes one worker sends per pursuit round: m x (2 values + 2 indices), 8 bytes each.
constexpr std::size_t summary_bytes(std::size_t m) noexcept { return m * 4 * 8; }

/// Full sweeps over local data: the largest number of complete local sweeps
/// recorded by any worker. Workers without rows never count.
std::size_t count_passes(const ExecutionTrace& trace);

/// What worker `worker` computes from its own rows.
WorkerSummary worker_pursuit(const Matrix& local_rows, const std::vector<std::size_t>& global_rows,
                             std::size_t worker, const PursuitConfig& cfg, std::size_t first, std::size_t count);

/// Algorithm-2 style pursuit. Equal to pursue(X, cfg) for every valid partition.
ExtremeSet run_distributed(const Matrix& X, const Partition& part, const PursuitConfig& cfg,
                           ExecutionTrace* trace = nullptr);

/// Adaptive rounds over a partition; each round is one sweep per worker.
/// Equal to pursue_adaptive(X, cfg, patience).
ExtremeSet run_distributed_adaptive(const Matrix& X, const Partition& part, const PursuitConfig& cfg,
                                    std::size_t rounds_patience = 1, ExecutionTrace* trace = nullptr);

/// Second pass: H = X[H_rows] is broadcast and every worker solves NNLS for its
/// own rows. Row-for-row identical to nnls_fit(X, H). Solver failures are
/// rethrown as WorkerError carrying the worker id.
Matrix distributed_weights(const Matrix& X, const Partition& part, const std::vector<std::size_t>& H_rows,
                           ExecutionTrace* trace = nullptr, double tol = 1e-8, std::size_t max_iter = 5000);

/// Per-worker report: worker, local_rows, pursuit_rows_read, weights_rows_read,
/// pursuit_bytes, weights_bytes.
Matrix communication_table(const ExecutionTrace& trace);

} // namespace archpursuit
