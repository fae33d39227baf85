#include "archpursuit/rng.hpp"

#include <cmath>
#include <numbers>

namespace archpursuit {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;

inline std::uint64_t bits53(std::uint32_t lo, std::uint32_t hi) {
    return ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
}

std::uint64_t domain_stream(Domain domain, std::uint64_t substream) {
    return (static_cast<std::uint64_t>(domain) << 56) ^ (substream & 0x00FFFFFFFFFFFFFFull);
}

} // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream),
      key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

CounterRng::CounterRng(std::uint64_t seed, Domain domain, std::uint64_t substream) noexcept
    : CounterRng(seed, domain_stream(domain, substream)) {}

PhiloxCounter CounterRng::block(std::uint64_t index) const noexcept {
    return philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
                      key_);
}

double CounterRng::uniform(std::uint64_t index) const noexcept {
    const auto b = block(index);
    return static_cast<double>(bits53(b[0], b[1])) * kTwoPow53Inv;
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t index) const noexcept {
    const auto b = block(index);
    // u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>(bits53(b[0], b[1]) + 1) * kTwoPow53Inv;
    const double u2 = static_cast<double>(bits53(b[2], b[3])) * kTwoPow53Inv;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

CounterRng CounterRng::split(std::uint64_t child) const noexcept {
    return CounterRng(seed_, splitmix64(stream_ ^ splitmix64(child + 0x632BE59BD9B4E019ull)));
}

double RngStream::uniform() noexcept { return rng_.uniform(next_++); }

double RngStream::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const auto [z0, z1] = rng_.normal_pair(next_++);
    spare_ = z1;
    has_spare_ = true;
    return z0;
}

} // namespace archpursuit
