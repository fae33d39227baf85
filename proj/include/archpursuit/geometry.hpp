#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "archpursuit/matrix.hpp"
#include "archpursuit/polytopes.hpp"

namespace archpursuit {

struct SolidAngleEstimate {
    std::vector<double> omega;     ///< per candidate, in the order given
    std::vector<double> std_error; ///< binomial standard errors
    std::size_t samples = 0;
    double total = 0;              ///< sum of omega
    double total_std_error = 0;    ///< standard error of the sum
};

/// Monte Carlo normal-cone angles: omega_i is the fraction of Gaussian
/// directions z with z'x_i > z'x_l for every other row l. Ties count for
/// nobody. Samples are drawn in fixed blocks with their own counter streams,
/// so the result does not depend on the thread count.
SolidAngleEstimate estimate_solid_angles(const Matrix& X, std::span<const std::size_t> ext,
                                         std::size_t samples = 100000, std::uint64_t seed = 0);

/// Distance from row i to the convex hull of the other rows listed in `ext`.
/// `i` must appear in `ext`; throws ArgumentError with fewer than two points.
double simplicial_constant(const Matrix& X, std::span<const std::size_t> ext, std::size_t i, double tol = 1e-15);

/// kappa = 1 / log(1 / max_i (1 - 2 omega_i)); zero when every omega_i is 1/2.
/// Throws ArgumentError when some omega is outside (0, 1/2].
double kappa(std::span<const double> omega);

struct SampleSizePrediction {
    double kappa = 0;
    double kappa_bar = 0; ///< kappa / k
    std::size_t m = 1;    ///< ceil(kappa log(k / delta)), at least 1
};

SampleSizePrediction required_m(std::span<const double> omega, std::size_t k, double delta);

/// sum_i (1 - 2 omega_i)^m capped at 1: the union bound on missing some vertex.
double miss_probability_bound(std::span<const double> omega, std::size_t m);

/// Normalized area of {u on S^(p-1) : u'e >= t}: lower bound for chordal radius r
/// and upper bound for height t >= 0.
double cap_lower_bound(std::size_t p, double r);
double cap_upper_bound(std::size_t p, double t);
/// Height of the cap of chordal radius r: 1 - r^2 / 2.
constexpr double cap_height(double r) noexcept { return 1.0 - 0.5 * r * r; }

struct CapCheck {
    double t = 0;        ///< cap height
    double r = 0;        ///< chordal radius, sqrt(2 (1 - t))
    double area = 0;     ///< Monte Carlo estimate
    double std_error = 0;
    double lower = 0;    ///< lower bound from the radius
    double upper = 0;    ///< upper bound from the height; 1 for t < 0
    bool lower_holds = false;
    bool upper_holds = false;
};

struct CapBoundReport {
    std::size_t p = 0;
    std::vector<CapCheck> checks;
    bool all_hold() const noexcept;
};

/// Draws `trials` caps, half parameterized by a radius in (0, 2] and half by a
/// height in [0, 1), estimates each area from `samples` uniform directions and
/// tests both bounds with a 3 standard-error allowance.
CapBoundReport check_cap_bounds(std::size_t p, std::size_t trials, std::uint64_t seed, std::size_t samples = 20000);

struct LemmaCheck {
    std::size_t vertex = 0;
    double omega = 0, omega_se = 0;
    double alpha = 0;
    // Upper bound on alpha from the solid angle.
    double base_diameter = 0;     ///< diam of the hull of the neighbours
    double radius_from_omega = 0; ///< 2 (2 omega)^(1/(d-1)) at omega + 3 se
    double alpha_bound = 0;       ///< infinite when vacuous
    bool alpha_bound_vacuous = false;
    bool alpha_bound_holds = false;
    // Upper bound on the solid angle from alpha.
    double inscribed_sine = 0;    ///< sine of the widest cone inside the tangent cone
    double r_min = 0;             ///< alpha * tan of that angle
    bool omega_bound_applies = false;
    double omega_bound = 0;
    bool omega_bound_holds = false;
    std::string note;
};

struct LemmaReport {
    std::string polytope;
    std::vector<LemmaCheck> vertices;
    bool all_hold() const noexcept;
};

LemmaReport check_simplicial_lemmas(const Polytope& P, std::size_t samples = 100000, std::uint64_t seed = 0);

struct GeometryReport {
    std::vector<std::size_t> ext;
    SolidAngleEstimate angles;
    std::vector<double> alpha;
    double kappa = 0;     ///< infinite when some omega estimate is zero
    double kappa_bar = 0;
    double delta = 0.05;
    std::size_t m_required = 0; ///< 0 when kappa is infinite
    std::string note;
};

/// Solid angles, simplicial constants and the predicted functional count.
GeometryReport diagnose(const Matrix& X, std::span<const std::size_t> ext, std::size_t samples = 100000,
                        std::uint64_t seed = 0, double delta = 0.05);

/// Rows (index, omega, std_error, alpha).
Matrix geometry_table(const GeometryReport& report);

} // namespace archpursuit
