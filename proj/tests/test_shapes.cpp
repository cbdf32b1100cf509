#include <doctest.h>

#include <cmath>
#include <random>

#include "glance/shapes.hpp"

using namespace glance;

namespace {
const Vec2 kCenter{0.5, 0.5};
const double kDiskR = 0.35355339059327373;  // diameter 1/sqrt(2)
}  // namespace

TEST_CASE("disk containment and distances") {
    const DampingShape disk = make_disk(kCenter, kDiskR);
    CHECK(disk.contains(TorusPoint{0.5, 0.5}));
    CHECK_FALSE(disk.contains(TorusPoint{0.5, 0.5 + kDiskR}));        // boundary
    CHECK_FALSE(disk.contains(TorusPoint{0.5, 0.5 + kDiskR + 0.01}));  // outside
    CHECK(disk.distance_to_complement(TorusPoint{0.5, 0.5}) == doctest::Approx(kDiskR));
    CHECK(disk.distance_to_complement(TorusPoint{0.97, 0.5}) == doctest::Approx(0.0));
    CHECK(disk.boundary_distance(TorusPoint{0.5, 0.9}) ==
          doctest::Approx(0.4 - kDiskR).epsilon(1e-12));
    // outside, left of the disk: torus metric picks the direct route
    CHECK(disk.boundary_distance(TorusPoint{0.02, 0.5}) ==
          doctest::Approx(0.48 - kDiskR).epsilon(1e-9));
    // wraparound: the seam route is shorter from the far right
    CHECK(disk.boundary_distance(TorusPoint{0.98, 0.5}) ==
          doctest::Approx(0.48 - kDiskR).epsilon(1e-9));
}

TEST_CASE("polygon queries and inradius") {
    // axis-aligned square with side 0.5 centered at (0.5, 0.5)
    const DampingShape square = make_polygon_from_vertices(
        {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}});
    CHECK(square.contains(TorusPoint{0.5, 0.5}));
    CHECK_FALSE(square.contains(TorusPoint{0.25, 0.5}));
    CHECK(square.distance_to_complement(TorusPoint{0.5, 0.5}) == doctest::Approx(0.25));
    const auto inr = square.inradius();
    CHECK(inr.value == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(inr.value <= inr.upper_bound);
    CHECK(inr.upper_bound <= 0.26);

    CHECK_THROWS_AS(make_polygon({{1.0, 0.0}, {0.0, 1.0}}, {0, 0}), std::domain_error);
    CHECK_THROWS_AS(make_polygon({{1.0, 0.0}, {0.0, 1.0}, {-0.5, -0.5}}, {0, 0}),
                    std::domain_error);
}

TEST_CASE("polygon vertex perturbation moves the inradius by at most epsilon") {
    const std::vector<Vec2> base{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}};
    const double r0 = make_polygon_from_vertices(base).inradius().value;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        const double eps = 1e-3;
        std::vector<Vec2> moved = base;
        for (Vec2& v : moved) {
            const Vec2 d{u(rng), u(rng)};
            v += d * (eps / std::max(1.0, d.norm()));
        }
        const double r1 = make_polygon_from_vertices(moved).inradius().value;
        CHECK(std::fabs(r1 - r0) <= eps + 1e-5);
    }
}

TEST_CASE("superellipse containment, distance, inradius") {
    const DampingShape se = make_superellipse(kCenter, 0.3, 0.3, 4.0, 4.0);
    CHECK(se.contains(TorusPoint{0.5, 0.5}));
    CHECK_FALSE(se.contains(TorusPoint{0.8, 0.5}));  // axis boundary point
    const double d_center = se.distance_to_complement(TorusPoint{0.5, 0.5});
    CHECK(d_center == doctest::Approx(0.3).epsilon(1e-6));

    // quadratic superellipse = disk: distance has a closed form to check
    const DampingShape round = make_superellipse(kCenter, 0.3, 0.3, 2.0, 2.0);
    CHECK(round.distance_to_complement(TorusPoint{0.6, 0.5}) ==
          doctest::Approx(0.2).epsilon(1e-7));
}

TEST_CASE("strip geometry, including the full-width complement of a geodesic") {
    const DampingShape strip = make_strip(RationalDirection{1, 0}, 0.15, 0.85);
    CHECK(strip.contains(TorusPoint{0.5, 0.123}));
    CHECK_FALSE(strip.contains(TorusPoint{0.9, 0.4}));
    CHECK(strip.distance_to_complement(TorusPoint{0.5, 0.7}) == doctest::Approx(0.35));
    CHECK(strip.inradius().value == doctest::Approx(0.35));
    CHECK(strip.properly_projected());

    const DampingShape line_complement = make_strip(RationalDirection{1, 0}, 0.0, 1.0);
    CHECK(line_complement.contains(TorusPoint{0.5, 0.9}));
    CHECK_FALSE(line_complement.contains(TorusPoint{0.0, 0.4}));
    CHECK(line_complement.distance_to_complement(TorusPoint{0.25, 0.9}) ==
          doctest::Approx(0.25));
}

TEST_CASE("curve shapes: circle and ellipse") {
    const DampingShape circle = make_curve(SmoothCurve::circle(kCenter, 0.3));
    CHECK(circle.contains(TorusPoint{0.5, 0.5}));
    CHECK_FALSE(circle.contains(TorusPoint{0.81, 0.5}));
    CHECK(circle.distance_to_complement(TorusPoint{0.5, 0.5}) == doctest::Approx(0.3).epsilon(1e-7));
    CHECK(circle.distance_to_complement(TorusPoint{0.7, 0.5}) == doctest::Approx(0.1).epsilon(1e-6));

    const SmoothCurve ell = SmoothCurve::ellipse(kCenter, 0.3, 0.2);
    CHECK(ell.curvature(0.0) == doctest::Approx(0.3 / (0.2 * 0.2)));
    CHECK(ell.curvature(0.25) == doctest::Approx(0.2 / (0.3 * 0.3)));
}

TEST_CASE("curvature is parametrization invariant") {
    // same circle, different parametrization speeds
    const SmoothCurve fast = SmoothCurve::circle({0.5, 0.5}, 0.25);
    const auto gamma = [](double t) {
        const double a = 2 * 3.14159265358979323846 * (t * t * 0.5 + 0.5 * t);  // phi' > 0 on [0,1)
        return Vec2{0.5 + 0.25 * std::cos(a), 0.5 + 0.25 * std::sin(a)};
    };
    const double h = 1e-5;
    const auto dgamma = [&](double t) { return (gamma(t + h) - gamma(t - h)) / (2 * h); };
    const auto ddgamma = [&](double t) {
        return (gamma(t + h) - gamma(t) * 2.0 + gamma(t - h)) / (h * h);
    };
    const SmoothCurve slow(gamma, dgamma, ddgamma, "reparametrized-circle");
    for (double t : {0.1, 0.33, 0.6, 0.9}) {
        CHECK(slow.curvature(t) == doctest::Approx(4.0).epsilon(1e-3));
        CHECK(fast.curvature(t) == doctest::Approx(4.0).epsilon(1e-9));
    }
}

TEST_CASE("superellipse curve factory has vanishing curvature at the axes") {
    const SmoothCurve se = SmoothCurve::superellipse(kCenter, 0.3, 0.3, 4);
    CHECK(se.curvature(0.0) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(se.curvature(0.25) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(se.curvature(0.125) > 1.0);  // diagonal points strongly curved
    // boundary point matches the level-set equation
    const Vec2 p = se.position(0.37);
    const double lvl = std::pow(std::fabs((p.x - 0.5) / 0.3), 4.0) +
                       std::pow(std::fabs((p.y - 0.5) / 0.3), 4.0);
    CHECK(lvl == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("proper projection check") {
    CHECK(make_disk(kCenter, kDiskR).properly_projected());
    CHECK_FALSE(make_disk(kCenter, 0.6).properly_projected());
    CHECK(make_strip(RationalDirection{2, 1}, 0.0, 0.3).properly_projected());
}

TEST_CASE("distance to complement is 1-Lipschitz on the torus") {
    const DampingShape shape = make_polygon_from_vertices(
        {{0.2, 0.2}, {0.8, 0.3}, {0.7, 0.8}, {0.4, 0.6}, {0.15, 0.7}});
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        const TorusPoint a{u(rng), u(rng)};
        const TorusPoint b{u(rng), u(rng)};
        const double da = shape.distance_to_complement(a);
        const double db = shape.distance_to_complement(b);
        CHECK(std::fabs(da - db) <= torus_distance(a, b) + 1e-9);
        // contains and distance agree
        CHECK(shape.contains(a) == (da > 0.0));
    }
}

TEST_CASE("union of disjoint parts") {
    std::vector<DampingShape> parts;
    parts.push_back(make_disk({0.25, 0.25}, 0.1));
    parts.push_back(make_disk({0.75, 0.75}, 0.15));
    const DampingShape u = make_union(std::move(parts));
    CHECK(u.contains(TorusPoint{0.25, 0.25}));
    CHECK(u.contains(TorusPoint{0.75, 0.75}));
    CHECK_FALSE(u.contains(TorusPoint{0.5, 0.5}));
    CHECK(u.distance_to_complement(TorusPoint{0.75, 0.75}) == doctest::Approx(0.15));
    CHECK(u.inradius().value == doctest::Approx(0.15).epsilon(1e-4));
    CHECK(u.properly_projected());
}

TEST_CASE("rotation and translation preserve shape size") {
    const DampingShape square = make_polygon_from_vertices(
        {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}});
    const DampingShape rot = rotated_shape(square, 0.5235987755982988);  // 30 degrees
    CHECK(rot.inradius().value == doctest::Approx(0.25).epsilon(1e-5));
    CHECK(rot.properly_projected());

    const DampingShape moved = translated_shape(square, {0.3, 0.7});
    CHECK(moved.contains(TorusPoint{0.8, 0.2}));
    CHECK(moved.inradius().value == doctest::Approx(0.25).epsilon(1e-6));
}
