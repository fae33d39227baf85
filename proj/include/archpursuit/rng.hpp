#pragma once

// Counter-based random numbers (Philox4x32-10, Salmon et al. 2011).
//
// Every draw is a pure function of (seed, stream, index), so any worker can
// regenerate any part of any stream without coordination.

#include <array>
#include <cstdint>
#include <utility>

namespace archpursuit {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key) noexcept;

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream domains keep unrelated consumers of one seed apart.
enum class Domain : std::uint8_t {
    functionals = 1,
    instance = 2,
    noise = 3,
    solid_angle = 4,
    caps = 5,
    trials = 6,
};

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;
    CounterRng(std::uint64_t seed, Domain domain, std::uint64_t substream = 0) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    PhiloxCounter block(std::uint64_t index) const noexcept;
    /// Uniform on [0, 1) with 53 random bits (block words 0 and 1).
    double uniform(std::uint64_t index) const noexcept;
    /// Two independent standard normals from one block (Box-Muller).
    std::pair<double, double> normal_pair(std::uint64_t index) const noexcept;

    /// Independent child stream under the same seed.
    CounterRng split(std::uint64_t child) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    PhiloxKey key_;
};

/// Sequential view over a CounterRng for single-threaded generators.
class RngStream {
public:
    explicit RngStream(CounterRng rng) noexcept : rng_(rng) {}

    double uniform() noexcept;
    double normal() noexcept;

private:
    CounterRng rng_;
    std::uint64_t next_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace archpursuit
