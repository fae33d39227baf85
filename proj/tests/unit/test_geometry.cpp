#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "archpursuit/errors.hpp"
#include "archpursuit/generators.hpp"
#include "archpursuit/geometry.hpp"
#include "archpursuit/polytopes.hpp"
#include "archpursuit/pursuit.hpp"
#include "archpursuit/simplex_qp.hpp"

using namespace archpursuit;

namespace {

std::vector<std::size_t> iota_indices(std::size_t n) {
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

bool within_se(double estimate, double truth, double se, double k = 3.0) {
    return std::abs(estimate - truth) <= k * se;
}

// Euclidean distance from q to segment [a, b], sampled on a grid of step 1e-4 in the segment parameter.
double grid_segment_distance(std::array<double, 2> q, std::array<double, 2> a, std::array<double, 2> b) {
    double best = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= 10000; ++s) {
        const double t = s * 1e-4;
        const double x = a[0] + t * (b[0] - a[0]) - q[0];
        const double y = a[1] + t * (b[1] - a[1]) - q[1];
        best = std::min(best, std::hypot(x, y));
    }
    return best;
}

// Normalized cap area on S^(p-1) at height t by Simpson quadrature of sin^(p-2).
double cap_area_quadrature(std::size_t p, double t) {
    auto integral = [p](double upper) {
        const int n = 20000;
        const double h = upper / n;
        double s = 0.0;
        for (int i = 0; i <= n; ++i) {
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            s += w * std::pow(std::sin(i * h), static_cast<double>(p) - 2.0);
        }
        return s * h / 3.0;
    };
    return integral(std::acos(t)) / integral(std::numbers::pi);
}

// Threshold oracle for the simplex projection: find tau with sum max(v - tau, 0) = 1 by bisection.
std::vector<double> bisection_simplex(const std::vector<double>& v) {
    double lo = *std::min_element(v.begin(), v.end()) - 1.0, hi = *std::max_element(v.begin(), v.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double s = 0.0;
        for (double x : v) s += std::max(x - mid, 0.0);
        (s > 1.0 ? lo : hi) = mid;
    }
    std::vector<double> out;
    for (double x : v) out.push_back(std::max(x - 0.5 * (lo + hi), 0.0));
    return out;
}

const Matrix kSquare(4, 2, {0, 0, 1, 0, 1, 1, 0, 1});

} // namespace

TEST_CASE("solid angles: square corners, segment ends, regular simplex") {
    const auto sq = estimate_solid_angles(kSquare, iota_indices(4), 100000, 1);
    for (std::size_t i = 0; i < 4; ++i) CHECK(within_se(sq.omega[i], 0.25, sq.std_error[i]));

    const Matrix seg(2, 1, {0.0, 3.0});
    const auto s = estimate_solid_angles(seg, iota_indices(2), 20000, 2);
    CHECK(s.omega[0] + s.omega[1] == doctest::Approx(1.0));
    CHECK(within_se(s.omega[0], 0.5, s.std_error[0]));

    for (std::size_t k : {3u, 5u, 8u}) {
        const auto P = regular_simplex(k);
        const auto est = estimate_solid_angles(P.vertices, iota_indices(k), 100000, 3);
        for (std::size_t i = 0; i < k; ++i) CHECK(within_se(est.omega[i], 1.0 / k, est.std_error[i]));
    }
}

TEST_CASE("solid angles form a distribution over the extreme points") {
    const auto inst = gen_uniform_separable(80, 4, 4, 5);
    const auto est = estimate_solid_angles(inst.X, iota_indices(4), 100000, 9);
    CHECK(within_se(est.total, 1.0, est.total_std_error));
    for (double w : est.omega) {
        CHECK(w >= 0.0);
        CHECK(w < 0.5);
    }
}

TEST_CASE("non-extreme candidates get zero and are still reported") {
    const Matrix X(5, 2, {0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5});
    const std::vector<std::size_t> ext{4, 0};
    const auto est = estimate_solid_angles(X, ext, 5000, 0);
    CHECK(est.omega[0] == 0.0);
    CHECK(est.std_error[0] > 0.0);
    CHECK(within_se(est.omega[1], 0.25, est.std_error[1]));
    CHECK_THROWS_AS(estimate_solid_angles(X, ext, 0, 0), ArgumentError);
    const std::vector<std::size_t> bad{7};
    CHECK_THROWS_AS(estimate_solid_angles(X, bad, 10, 0), ArgumentError);
}

TEST_CASE("solid angle estimates are deterministic and scale invariant") {
    const auto inst = gen_uniform_separable(40, 3, 3, 4);
    const auto ext = iota_indices(3);
    const auto a = estimate_solid_angles(inst.X, ext, 30000, 17);
    CHECK(a.omega == estimate_solid_angles(inst.X, ext, 30000, 17).omega);
    CHECK(a.omega != estimate_solid_angles(inst.X, ext, 30000, 18).omega);

    for (double c : {0.5, 3.0, 1000.0}) {
        Matrix scaled = inst.X;
        for (double& v : scaled.values()) v *= c;
        CHECK(estimate_solid_angles(scaled, ext, 30000, 17).omega == a.omega);
        for (std::size_t i : ext) {
            const double base = simplicial_constant(inst.X, ext, i);
            CHECK(simplicial_constant(scaled, ext, i) == doctest::Approx(c * base).epsilon(1e-9));
        }
    }
}

TEST_CASE("vote fractions from pursuit agree with the solid angle estimates") {
    const auto P = regular_polygon(5);
    Matrix X = P.vertices;
    X(0, 0) += 0.3; // break the symmetry so the angles differ
    const auto est = estimate_solid_angles(X, iota_indices(5), 100000, 6);
    PursuitConfig cfg;
    cfg.m = 50000;
    cfg.seed = 6;
    const auto es = pursue(X, cfg);
    REQUIRE(es.indices == iota_indices(5));
    for (std::size_t i = 0; i < 5; ++i) {
        const double frac = static_cast<double>(es.votes[i]) / (2.0 * cfg.m);
        const double se = std::sqrt(est.std_error[i] * est.std_error[i] + frac * (1 - frac) / (2.0 * cfg.m));
        CHECK(within_se(frac, est.omega[i], se));
    }
}

TEST_CASE("simplicial constant closed forms") {
    const Matrix basis = Matrix::identity(3);
    const auto ext = iota_indices(3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(simplicial_constant(basis, ext, i) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-9));

    const Matrix two(2, 3, {1, 2, 3, 4, 6, 3});
    CHECK(simplicial_constant(two, iota_indices(2), 0) == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(simplicial_constant(two, iota_indices(2), 1) == doctest::Approx(5.0).epsilon(1e-12));

    // Only the listed points count as the hull.
    const Matrix four(4, 2, {0, 0, 2, 0, 0, 2, 2, 2});
    const std::vector<std::size_t> sub{0, 1, 2};
    CHECK(simplicial_constant(four, sub, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("simplicial constant matches a grid oracle on random polygons") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> th(10);
        for (double& t : th) t = angle(gen);
        std::sort(th.begin(), th.end());
        Matrix X(10, 2);
        for (std::size_t i = 0; i < 10; ++i) {
            X(i, 0) = std::cos(th[i]);
            X(i, 1) = std::sin(th[i]);
        }
        const auto ext = iota_indices(10);
        for (std::size_t i = 0; i < 10; ++i) {
            // The nearest hull point lies on a segment between two of the other points.
            double oracle = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < 10; ++a)
                for (std::size_t b = a + 1; b < 10; ++b) {
                    if (a == i || b == i) continue;
                    oracle = std::min(oracle, grid_segment_distance({X(i, 0), X(i, 1)}, {X(a, 0), X(a, 1)},
                                                                    {X(b, 0), X(b, 1)}));
                }
            CHECK(std::abs(simplicial_constant(X, ext, i) - oracle) <= 1e-3);
        }
    }
}

TEST_CASE("simplicial constant errors") {
    const std::vector<std::size_t> one{0};
    CHECK_THROWS_AS(simplicial_constant(kSquare, one, 0), ArgumentError);
    const std::vector<std::size_t> ext{0, 1};
    CHECK_THROWS_AS(simplicial_constant(kSquare, ext, 2), ArgumentError);
}

TEST_CASE("simplex projection matches the threshold oracle") {
    CHECK(project_simplex(std::vector<double>{2.0, 0.0}) == std::vector<double>{1.0, 0.0});
    const auto third = project_simplex(std::vector<double>{0.3, 0.3, 0.3});
    for (double v : third) CHECK(v == doctest::Approx(1.0 / 3));

    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(1 + trial % 9);
        for (double& x : v) x = nd(gen);
        const auto got = project_simplex(v);
        const auto want = bisection_simplex(v);
        double sum = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(got[i] >= 0.0);
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-10));
            sum += got[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("distance to hull: inside points, vertices, certificates") {
    const std::vector<double> centre{0.5, 0.5};
    const auto in = distance_to_hull(kSquare, centre);
    CHECK(in.distance <= 1e-7);
    CHECK(in.converged);
    const std::vector<double> corner{1.0, 1.0};
    CHECK(distance_to_hull(kSquare, corner).distance <= 1e-7);
    const std::vector<double> out{2.0, 0.5};
    const auto d = distance_to_hull(kSquare, out);
    CHECK(d.distance == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::accumulate(d.weights.begin(), d.weights.end(), 0.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(distance_to_hull(Matrix(), out), ArgumentError);
    const std::vector<double> wrong{1.0};
    CHECK_THROWS_AS(distance_to_hull(kSquare, wrong), ArgumentError);
}

TEST_CASE("required_m examples") {
    const std::vector<double> square(4, 0.25);
    const auto sq = required_m(square, 4, 0.05);
    CHECK(sq.m == 7);
    CHECK(sq.kappa == doctest::Approx(1.0 / std::log(2.0)));
    CHECK(sq.kappa_bar == doctest::Approx(sq.kappa / 4));

    const std::vector<double> flat(100, 0.01);
    CHECK(std::abs(kappa(flat) - 50.0) <= 0.05 * 50.0);

    const std::vector<double> halves(2, 0.5);
    CHECK(kappa(halves) == 0.0);
    CHECK(required_m(halves, 2, 0.05).m == 1);

    const std::vector<double> zero{0.25, 0.0};
    const std::vector<double> big{0.6, 0.2};
    CHECK_THROWS_AS(required_m(zero, 2, 0.05), ArgumentError);
    CHECK_THROWS_AS(required_m(big, 2, 0.05), ArgumentError);
    CHECK_THROWS_AS(required_m(square, 4, 0.0), ArgumentError);
    CHECK_THROWS_AS(required_m(square, 4, 1.0), ArgumentError);
    CHECK_THROWS_AS(required_m(square, 0, 0.1), ArgumentError);
    CHECK_THROWS_AS(kappa(std::vector<double>{}), ArgumentError);

    CHECK(miss_probability_bound(square, 7) == doctest::Approx(4.0 / 128));
    CHECK(miss_probability_bound(std::vector<double>{0.01, 0.01}, 0) == 1.0);
}

TEST_CASE("pursuit with the predicted m misses with probability at most delta") {
    const double delta = 0.05;
    const std::size_t trials = 2000;
    const double slack = 3.0 * std::sqrt(delta * (1 - delta) / trials);
    const auto inst = gen_uniform_separable(60, 6, 4, 8);
    const std::vector<Matrix> cases{kSquare, regular_simplex(4).vertices, inst.X};
    for (const Matrix& X : cases) {
        std::vector<std::size_t> truth = X.rows() == 4 ? iota_indices(4) : inst.true_extreme_indices;
        const auto est = estimate_solid_angles(X, truth, 100000, 31);
        const auto pred = required_m(est.omega, truth.size(), delta);
        std::size_t misses = 0;
        for (std::size_t t = 0; t < trials; ++t) {
            PursuitConfig cfg;
            cfg.m = pred.m;
            cfg.seed = 1000 + t;
            const auto es = pursue(X, cfg);
            if (!std::includes(es.indices.begin(), es.indices.end(), truth.begin(), truth.end())) ++misses;
        }
        CHECK(static_cast<double>(misses) / trials <= delta + slack);
    }
}

TEST_CASE("cap bound formulas") {
    CHECK(cap_upper_bound(5, 0.0) == 1.0);
    CHECK(cap_upper_bound(5, -0.2) == 1.0);
    CHECK(cap_lower_bound(7, 2.0) == 0.5);
    CHECK(cap_upper_bound(3, 0.5) == doctest::Approx(std::pow(0.75, 1.5)));
    CHECK(cap_upper_bound(4, 0.9) == doctest::Approx(std::pow(1.0 / 1.8, 4)));
    CHECK(cap_height(std::sqrt(2.0)) == doctest::Approx(0.0));
    CHECK(cap_height(2.0) == -1.0);
}

TEST_CASE("cap areas agree with closed forms and quadrature") {
    for (std::size_t p : {3u, 6u}) {
        const auto rep = check_cap_bounds(p, 12, 44, 40000);
        for (const auto& c : rep.checks) {
            const double exact = p == 3 ? 0.5 * (1.0 - c.t) : cap_area_quadrature(p, std::max(c.t, -1.0));
            CHECK(c.r == doctest::Approx(std::sqrt(2.0 * (1.0 - c.t))));
            CHECK(within_se(c.area, exact, std::max(c.std_error, 1.0 / 40000), 4.0));
        }
    }
    CHECK(cap_area_quadrature(3, 0.5) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("cap bounds hold across dimensions") {
    for (std::size_t p : {2u, 3u, 5u, 10u, 20u}) {
        const auto rep = check_cap_bounds(p, 40, p, 20000);
        CHECK(rep.checks.size() == 40);
        CHECK(rep.all_hold());
    }
    CHECK_THROWS_AS(check_cap_bounds(1, 4, 0), ArgumentError);
}

TEST_CASE("lemma checks on the regular simplex in R^3") {
    const auto rep = check_simplicial_lemmas(regular_simplex(4), 100000, 12);
    REQUIRE(rep.vertices.size() == 4);
    CHECK(rep.all_hold());
    for (const auto& c : rep.vertices) {
        CHECK(c.alpha == doctest::Approx(std::sqrt(4.0 / 3)).epsilon(1e-9)); // sqrt(k/(k-1)), k = 4
        CHECK(c.base_diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
        CHECK(c.alpha_bound_holds);
        // Widest inscribed cone at a regular tetrahedron vertex: sin = 1/3.
        CHECK(c.inscribed_sine == doctest::Approx(1.0 / 3).epsilon(1e-6));
        CHECK_FALSE(c.omega_bound_applies);
        CHECK_FALSE(c.note.empty());
    }
}

TEST_CASE("lemma checks on a needle simplex") {
    const auto P = needle_simplex(3, 6.0);
    const auto rep = check_simplicial_lemmas(P, 100000, 13);
    CHECK(rep.all_hold());
    for (std::size_t i = 1; i < 4; ++i) CHECK(rep.vertices[0].omega > rep.vertices[i].omega);
    CHECK(rep.vertices[0].alpha > rep.vertices[1].alpha);
}

TEST_CASE("lemma checks on the square and a hexagon") {
    const auto rep = check_simplicial_lemmas(regular_polygon(4), 100000, 14);
    CHECK(rep.all_hold());
    for (const auto& c : rep.vertices) {
        CHECK(c.omega_bound_applies);
        CHECK(c.inscribed_sine == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
        CHECK(c.r_min == doctest::Approx(c.alpha).epsilon(1e-5));
        CHECK(c.omega_bound_holds);
    }
    const auto hex = check_simplicial_lemmas(regular_polygon(6), 50000, 15);
    CHECK(hex.all_hold());
    for (const auto& c : hex.vertices) CHECK(c.omega_bound_applies);

    const auto cube = check_simplicial_lemmas(hypercube(2), 50000, 16);
    CHECK(cube.all_hold());
}

TEST_CASE("diagnose reports kappa and the predicted m") {
    const auto rep = diagnose(kSquare, iota_indices(4), 100000, 3, 0.05);
    CHECK(rep.m_required == 7);
    CHECK(rep.alpha.size() == 4);
    for (double a : rep.alpha) CHECK(a == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));
    const Matrix table = geometry_table(rep);
    CHECK(table.rows() == 4);
    CHECK(table.cols() == 4);
    CHECK(table(2, 0) == 2.0);
    CHECK(table(2, 3) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-9));

    const Matrix X(5, 2, {0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.5});
    const auto with_interior = diagnose(X, iota_indices(5), 2000, 3, 0.05);
    CHECK(std::isinf(with_interior.kappa));
    CHECK(with_interior.m_required == 0);
    CHECK_FALSE(with_interior.note.empty());

    const std::vector<std::size_t> single{1};
    CHECK(diagnose(kSquare, single, 100, 0, 0.05).m_required == 1);
    CHECK_THROWS_AS(diagnose(kSquare, std::vector<std::size_t>{}, 100, 0, 0.05), ArgumentError);
}
