#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "archpursuit/matrix.hpp"

namespace archpursuit {

/// X = W * H with the first k rows of W equal to the identity, so rows
/// 0..k-1 of X are the archetypes.
struct SeparableInstance {
    Matrix X;
    Matrix W;
    Matrix H;
    std::vector<std::size_t> true_extreme_indices;
};

/// H has i.i.d. U[0,1] entries; W rows k..n-1 are U[0,1] rows normalized to sum to one.
SeparableInstance gen_uniform_separable(std::size_t n, std::size_t p, std::size_t k, std::uint64_t seed);

/// H is the leading k rows of the p x p Hilbert matrix, H(i,j) = 1/(i+j+1) with
/// 0-based indices. W as in gen_uniform_separable.
SeparableInstance gen_hilbert_separable(std::size_t n, std::size_t p, std::size_t k, std::uint64_t seed);

/// Vertices of a simplex plus every edge midpoint, with additive Gaussian noise.
struct NoisyPairsInstance {
    Matrix X;        ///< W * H + noise
    Matrix X_clean;  ///< W * H
    Matrix W;        ///< [I; W2^T], n = k + k(k-1)/2 rows
    Matrix H;        ///< k x p, i.i.d. U[0,1]
    std::vector<std::size_t> true_extreme_indices;
};

/// The clean part depends only on (p, k, seed); the noise pattern only on
/// (p, k, seed) as well and is scaled by epsilon, so a sweep over epsilon with
/// a fixed seed perturbs one geometry by proportional amounts.
NoisyPairsInstance make_noisy_pairs(std::size_t p, std::size_t k, double epsilon, std::uint64_t seed);
Matrix gen_noisy_pairs(std::size_t p, std::size_t k, double epsilon, std::uint64_t seed);

/// Number of pair rows, k choose 2.
constexpr std::size_t pair_count(std::size_t k) noexcept { return k * (k - 1) / 2; }

} // namespace archpursuit
