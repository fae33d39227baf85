#include "archpursuit/generators.hpp"

#include <numeric>

#include "archpursuit/errors.hpp"
#include "archpursuit/rng.hpp"

namespace archpursuit {

namespace {

void check_dims(std::size_t n, std::size_t p, std::size_t k) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    if (k > n) throw ArgumentError("k exceeds the number of rows n");
    if (k > p) throw ArgumentError("k exceeds the number of columns p");
}

Matrix mixing_weights(std::size_t n, std::size_t k, RngStream& rng) {
    Matrix W(n, k);
    for (std::size_t i = 0; i < k; ++i) W(i, i) = 1.0;
    for (std::size_t i = k; i < n; ++i) {
        auto r = W.row(i);
        for (double& v : r) v = rng.uniform();
        const double total = std::accumulate(r.begin(), r.end(), 0.0);
        if (total > 0.0) {
            for (double& v : r) v /= total;
        } else {
            for (double& v : r) v = 1.0 / static_cast<double>(k);
        }
    }
    return W;
}

SeparableInstance assemble(Matrix W, Matrix H) {
    SeparableInstance out;
    out.X = multiply(W, H);
    out.true_extreme_indices.resize(H.rows());
    std::iota(out.true_extreme_indices.begin(), out.true_extreme_indices.end(), std::size_t{0});
    out.W = std::move(W);
    out.H = std::move(H);
    return out;
}

} // namespace

SeparableInstance gen_uniform_separable(std::size_t n, std::size_t p, std::size_t k, std::uint64_t seed) {
    check_dims(n, p, k);
    RngStream rng(CounterRng(seed, Domain::instance));
    Matrix H(k, p);
    for (double& v : H.values()) v = rng.uniform();
    Matrix W = mixing_weights(n, k, rng);
    return assemble(std::move(W), std::move(H));
}

SeparableInstance gen_hilbert_separable(std::size_t n, std::size_t p, std::size_t k, std::uint64_t seed) {
    check_dims(n, p, k);
    RngStream rng(CounterRng(seed, Domain::instance));
    Matrix H(k, p);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < p; ++j) H(i, j) = 1.0 / static_cast<double>(i + j + 1);
    Matrix W = mixing_weights(n, k, rng);
    return assemble(std::move(W), std::move(H));
}

NoisyPairsInstance make_noisy_pairs(std::size_t p, std::size_t k, double epsilon, std::uint64_t seed) {
    if (k < 2) throw ArgumentError("noisy pairs need k >= 2");
    if (p == 0) throw ArgumentError("p must be at least 1");
    if (!(epsilon >= 0.0)) throw ArgumentError("epsilon must be non-negative");

    const std::size_t n = k + pair_count(k);
    NoisyPairsInstance out;
    out.W = Matrix(n, k);
    for (std::size_t i = 0; i < k; ++i) out.W(i, i) = 1.0;
    std::size_t row = k;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b, ++row) {
            out.W(row, a) = 0.5;
            out.W(row, b) = 0.5;
        }

    RngStream rng(CounterRng(seed, Domain::instance));
    out.H = Matrix(k, p);
    for (double& v : out.H.values()) v = rng.uniform();
    out.X_clean = multiply(out.W, out.H);

    out.X = out.X_clean;
    if (epsilon > 0.0) {
        RngStream noise(CounterRng(seed, Domain::noise));
        for (double& v : out.X.values()) v += epsilon * noise.normal();
    }
    out.true_extreme_indices.resize(k);
    std::iota(out.true_extreme_indices.begin(), out.true_extreme_indices.end(), std::size_t{0});
    return out;
}

Matrix gen_noisy_pairs(std::size_t p, std::size_t k, double epsilon, std::uint64_t seed) {
    return make_noisy_pairs(p, k, epsilon, seed).X;
}

} // namespace archpursuit
