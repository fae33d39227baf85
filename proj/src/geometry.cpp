#include "archpursuit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "archpursuit/errors.hpp"
#include "archpursuit/parallel.hpp"
#include "archpursuit/rng.hpp"
#include "archpursuit/simd/kernels.hpp"
#include "archpursuit/simplex_qp.hpp"

namespace archpursuit {

namespace {

constexpr std::size_t kSampleBlock = 4096;

// Standard normal coordinate c of sample s within one counter stream.
void gaussian_direction(const CounterRng& rng, std::size_t sample, std::span<double> z) {
    for (std::size_t c = 0; c < z.size(); c += 2) {
        const auto [a, b] = rng.normal_pair((static_cast<std::uint64_t>(sample) << 32) | (c >> 1));
        z[c] = a;
        if (c + 1 < z.size()) z[c + 1] = b;
    }
}

double binomial_se(double p, std::size_t n) {
    // A zero or full count still carries about 1/n of uncertainty.
    const double var = std::max(p * (1.0 - p), 1.0 / static_cast<double>(n));
    return std::sqrt(var / static_cast<double>(n));
}

} // namespace

SolidAngleEstimate estimate_solid_angles(const Matrix& X, std::span<const std::size_t> ext, std::size_t samples,
                                         std::uint64_t seed) {
    if (X.rows() == 0 || X.cols() == 0) throw ArgumentError("solid angles need a non-empty matrix");
    if (samples == 0) throw ArgumentError("samples must be at least 1");
    std::vector<std::ptrdiff_t> position(X.rows(), -1);
    for (std::size_t e = 0; e < ext.size(); ++e) {
        if (ext[e] >= X.rows()) throw ArgumentError("candidate index outside the data");
        position[ext[e]] = static_cast<std::ptrdiff_t>(e);
    }

    const std::size_t blocks = (samples + kSampleBlock - 1) / kSampleBlock;
    std::vector<std::vector<std::size_t>> counts(blocks, std::vector<std::size_t>(ext.size(), 0));
    const auto& ker = simd::kernels();
    parallel_for(blocks, [&](std::size_t b) {
        const CounterRng rng(seed, Domain::solid_angle, b);
        std::vector<double> z(X.cols());
        const std::size_t end = std::min(samples, (b + 1) * kSampleBlock) - b * kSampleBlock;
        for (std::size_t s = 0; s < end; ++s) {
            gaussian_direction(rng, s, z);
            double best = -std::numeric_limits<double>::infinity();
            std::size_t winner = 0;
            bool tie = false;
            for (std::size_t r = 0; r < X.rows(); ++r) {
                const double v = ker.dot(X.row(r).data(), z.data(), z.size());
                if (v > best) {
                    best = v;
                    winner = r;
                    tie = false;
                } else if (v == best) {
                    tie = true;
                }
            }
            if (!tie && position[winner] >= 0) ++counts[b][static_cast<std::size_t>(position[winner])];
        }
    });

    SolidAngleEstimate out;
    out.samples = samples;
    out.omega.assign(ext.size(), 0.0);
    out.std_error.assign(ext.size(), 0.0);
    std::size_t total_hits = 0;
    for (std::size_t e = 0; e < ext.size(); ++e) {
        std::size_t hits = 0;
        for (const auto& block : counts) hits += block[e];
        total_hits += hits;
        out.omega[e] = static_cast<double>(hits) / static_cast<double>(samples);
        out.std_error[e] = binomial_se(out.omega[e], samples);
    }
    out.total = static_cast<double>(total_hits) / static_cast<double>(samples);
    out.total_std_error = binomial_se(out.total, samples);
    return out;
}

double simplicial_constant(const Matrix& X, std::span<const std::size_t> ext, std::size_t i, double tol) {
    if (ext.size() < 2) throw ArgumentError("the simplicial constant needs at least two extreme points");
    if (std::find(ext.begin(), ext.end(), i) == ext.end()) throw ArgumentError("row is not among the extreme points");
    std::vector<std::size_t> others;
    for (std::size_t e : ext) {
        if (e >= X.rows()) throw ArgumentError("extreme point index outside the data");
        if (e != i) others.push_back(e);
    }
    return distance_to_hull(select_rows(X, others), X.row(i), tol).distance;
}

double kappa(std::span<const double> omega) {
    if (omega.empty()) throw ArgumentError("kappa needs at least one solid angle");
    double worst = 0.0;
    for (double w : omega) {
        if (!(w > 0.0) || w > 0.5) throw ArgumentError("solid angles must lie in (0, 1/2]");
        worst = std::max(worst, 1.0 - 2.0 * w);
    }
    if (worst == 0.0) return 0.0; // log(1/0) is infinite
    return 1.0 / std::log(1.0 / worst);
}

SampleSizePrediction required_m(std::span<const double> omega, std::size_t k, double delta) {
    if (k == 0) throw ArgumentError("k must be at least 1");
    if (!(delta > 0.0 && delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
    SampleSizePrediction out;
    out.kappa = kappa(omega);
    out.kappa_bar = out.kappa / static_cast<double>(k);
    const double m = std::ceil(out.kappa * std::log(static_cast<double>(k) / delta));
    out.m = std::max<std::size_t>(1, static_cast<std::size_t>(m));
    return out;
}

double miss_probability_bound(std::span<const double> omega, std::size_t m) {
    double sum = 0.0;
    for (double w : omega) sum += std::pow(std::max(0.0, 1.0 - 2.0 * w), static_cast<double>(m));
    return std::min(1.0, sum);
}

double cap_lower_bound(std::size_t p, double r) {
    return 0.5 * std::pow(0.5 * r, static_cast<double>(p) - 1.0);
}

double cap_upper_bound(std::size_t p, double t) {
    if (t < 0.0) return 1.0;
    if (t <= 1.0 / std::sqrt(2.0)) return std::pow(1.0 - t * t, 0.5 * static_cast<double>(p));
    return std::pow(1.0 / (2.0 * t), static_cast<double>(p));
}

bool CapBoundReport::all_hold() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const CapCheck& c) { return c.lower_holds && c.upper_holds; });
}

CapBoundReport check_cap_bounds(std::size_t p, std::size_t trials, std::uint64_t seed, std::size_t samples) {
    if (p < 2) throw ArgumentError("caps need dimension at least 2");
    if (samples == 0) throw ArgumentError("samples must be at least 1");
    CapBoundReport report;
    report.p = p;
    report.checks.resize(trials);
    const CounterRng params(seed, Domain::caps, 0);
    parallel_for(trials, [&](std::size_t trial) {
        CapCheck& c = report.checks[trial];
        const double u = params.uniform(trial);
        if (trial % 2 == 0) {
            c.r = 2.0 * (1.0 - u); // (0, 2]
            c.t = cap_height(c.r);
        } else {
            c.t = u; // [0, 1)
            c.r = std::sqrt(2.0 * (1.0 - c.t));
        }
        const CounterRng rng(seed, Domain::caps, trial + 1);
        std::vector<double> z(p);
        std::size_t hits = 0;
        for (std::size_t s = 0; s < samples; ++s) {
            gaussian_direction(rng, s, z);
            double sq = 0.0;
            for (double v : z) sq += v * v;
            if (z[0] >= c.t * std::sqrt(sq)) ++hits;
        }
        c.area = static_cast<double>(hits) / static_cast<double>(samples);
        c.std_error = binomial_se(c.area, samples);
        c.lower = cap_lower_bound(p, c.r);
        c.upper = cap_upper_bound(p, c.t);
        c.lower_holds = c.area + 3.0 * c.std_error >= c.lower;
        c.upper_holds = c.area - 3.0 * c.std_error <= c.upper;
    });
    return report;
}

bool LemmaReport::all_hold() const noexcept {
    return std::all_of(vertices.begin(), vertices.end(), [](const LemmaCheck& c) {
        return c.alpha_bound_holds && (!c.omega_bound_applies || c.omega_bound_holds);
    });
}

LemmaReport check_simplicial_lemmas(const Polytope& P, std::size_t samples, std::uint64_t seed) {
    const std::size_t k = P.size();
    const std::size_t d = P.dim();
    if (k < 2) throw ArgumentError("lemma checks need at least two vertices");
    std::vector<std::size_t> all(k);
    for (std::size_t i = 0; i < k; ++i) all[i] = i;
    const auto angles = estimate_solid_angles(P.vertices, all, samples, seed);

    LemmaReport report;
    report.polytope = P.name;
    for (std::size_t i = 0; i < k; ++i) {
        LemmaCheck c;
        c.vertex = i;
        c.omega = angles.omega[i];
        c.omega_se = angles.std_error[i];
        c.alpha = simplicial_constant(P.vertices, all, i);

        for (std::size_t a : P.neighbours[i])
            for (std::size_t b : P.neighbours[i]) {
                double sq = 0.0;
                for (std::size_t col = 0; col < d; ++col) {
                    const double diff = P.vertices(a, col) - P.vertices(b, col);
                    sq += diff * diff;
                }
                c.base_diameter = std::max(c.base_diameter, std::sqrt(sq));
            }

        if (d < 2) {
            c.alpha_bound = std::numeric_limits<double>::infinity();
            c.alpha_bound_vacuous = true;
            c.alpha_bound_holds = true;
            c.note = "one-dimensional: radius formula undefined";
        } else {
            const double w = std::min(0.5, c.omega + 3.0 * c.omega_se);
            c.radius_from_omega = 2.0 * std::pow(2.0 * w, 1.0 / static_cast<double>(d - 1));
            const double height = 1.0 - 0.5 * c.radius_from_omega * c.radius_from_omega;
            if (height <= 0.0) {
                c.alpha_bound = std::numeric_limits<double>::infinity();
                c.alpha_bound_vacuous = true;
                c.alpha_bound_holds = true;
                c.note = "alpha bound vacuous: cap radius reaches the equator";
            } else {
                const double r = c.radius_from_omega;
                c.alpha_bound = c.base_diameter * r * std::sqrt(1.0 - 0.25 * r * r) / height;
                c.alpha_bound_holds = c.alpha <= c.alpha_bound * (1.0 + 1e-12);
            }
        }

        const std::vector<double> origin(d, 0.0);
        c.inscribed_sine = distance_to_hull(P.facet_normals[i], origin).distance;
        const double sine = std::min(1.0, c.inscribed_sine);
        const double cosine = std::sqrt(std::max(0.0, 1.0 - sine * sine));
        c.r_min = cosine > 0.0 ? c.alpha * sine / cosine : std::numeric_limits<double>::infinity();
        // r^2 / (alpha^2 + r^2) >= 1/2 is sin^2 >= 1/2 for the widest inscribed cone.
        c.omega_bound_applies = sine * sine >= 0.5 - 1e-9;
        if (c.omega_bound_applies) {
            c.omega_bound = std::pow(1.0 / (2.0 * sine), static_cast<double>(d));
            c.omega_bound_holds = c.omega - 3.0 * c.omega_se <= c.omega_bound;
        } else {
            c.omega_bound = std::numeric_limits<double>::infinity();
            if (!c.note.empty()) c.note += "; ";
            c.note += "omega bound skipped: inscribed cone narrower than 45 degrees";
        }
        report.vertices.push_back(c);
    }
    return report;
}

GeometryReport diagnose(const Matrix& X, std::span<const std::size_t> ext, std::size_t samples, std::uint64_t seed,
                        double delta) {
    if (ext.empty()) throw ArgumentError("diagnose needs at least one extreme point");
    GeometryReport rep;
    rep.ext.assign(ext.begin(), ext.end());
    rep.delta = delta;
    rep.angles = estimate_solid_angles(X, ext, samples, seed);
    if (ext.size() >= 2)
        for (std::size_t i : ext) rep.alpha.push_back(simplicial_constant(X, ext, i));

    if (ext.size() == 1) {
        rep.kappa = 0.0;
        rep.m_required = 1;
        rep.note = "single extreme point";
        return rep;
    }
    std::vector<double> omega = rep.angles.omega;
    if (std::any_of(omega.begin(), omega.end(), [](double w) { return w == 0.0; })) {
        rep.kappa = std::numeric_limits<double>::infinity();
        rep.kappa_bar = rep.kappa;
        rep.m_required = 0;
        rep.note = "some candidate never won a sample; kappa unbounded";
        return rep;
    }
    if (std::any_of(omega.begin(), omega.end(), [](double w) { return w > 0.5; })) {
        for (double& w : omega) w = std::min(w, 0.5);
        rep.note = "estimates above 1/2 clamped";
    }
    const auto pred = required_m(omega, ext.size(), delta);
    rep.kappa = pred.kappa;
    rep.kappa_bar = pred.kappa_bar;
    rep.m_required = pred.m;
    return rep;
}

Matrix geometry_table(const GeometryReport& report) {
    Matrix out(report.ext.size(), 4);
    for (std::size_t e = 0; e < report.ext.size(); ++e) {
        out(e, 0) = static_cast<double>(report.ext[e]);
        out(e, 1) = report.angles.omega[e];
        out(e, 2) = report.angles.std_error[e];
        out(e, 3) = report.alpha.empty() ? 0.0 : report.alpha[e];
    }
    return out;
}

} // namespace archpursuit
