#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace archpursuit {

/// Bad argument or violated precondition.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Row and column are 1-based; 0 means "not applicable".
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t row, std::size_t col = 0)
        : std::runtime_error(what), row_(row), col_(col) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Solver failure on one worker of a simulated distributed run.
class WorkerError : public std::runtime_error {
public:
    WorkerError(const std::string& what, std::size_t worker)
        : std::runtime_error(what), worker_(worker) {}

    std::size_t worker() const noexcept { return worker_; }

private:
    std::size_t worker_;
};

} // namespace archpursuit
