#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "glance/directions.hpp"

using namespace glance;

TEST_CASE("canonical representative and invariants") {
    const RationalDirection a(-1, 2);
    CHECK(a.p == 1);
    CHECK(a.q == -2);
    const RationalDirection b(0, -1);
    CHECK(b.p == 0);
    CHECK(b.q == 1);
    CHECK_THROWS_AS(RationalDirection(2, 4), std::domain_error);
    CHECK_THROWS_AS(RationalDirection(0, 0), std::domain_error);

    const RationalDirection v(3, 4);
    CHECK(v.period() == doctest::Approx(5.0));
    CHECK(v.unit().dot(v.perp_unit()) == doctest::Approx(0.0));
    CHECK(v.unit().norm() == doctest::Approx(1.0));
}

TEST_CASE("transverse step translates geodesics onto themselves") {
    SUBCASE("axis direction") {
        const RationalDirection v(1, 0);
        const Vec2 step = v.transverse_step();
        CHECK(step.x == doctest::Approx(0.0));
        CHECK(step.y == doctest::Approx(1.0));
    }
    SUBCASE("(1,2)") {
        const RationalDirection v(1, 2);
        const Vec2 step = v.transverse_step();
        CHECK(step.x == doctest::Approx(-2.0 / 5.0));
        CHECK(step.y == doctest::Approx(1.0 / 5.0));
        CHECK(step.norm() == doctest::Approx(1.0 / std::sqrt(5.0)));
    }
    SUBCASE("(3,4): translated point stays on the same geodesic") {
        const RationalDirection v(3, 4);
        const Vec2 step = v.transverse_step();
        CHECK(step.norm() == doctest::Approx(1.0 / 5.0));
        const DirectionFrame frame(v);
        const TorusPoint z = frame.point(0.1234, 0.777);
        const TorusPoint z2 = z.translated(step);
        // brute force: some longitudinal position on the geodesic matches z2
        double best = 1.0;
        const int n = 200000;
        for (int k = 0; k < n; ++k) {
            const double t = frame.t_circumference() * k / n;
            best = std::min(best, torus_distance(frame.point(0.1234, t), z2));
        }
        CHECK(best < 1e-4);
    }
}

TEST_CASE("direction enumeration matches the period bound") {
    SUBCASE("disk of diameter 1/sqrt(2)") {
        const auto dirs = enumerate_candidate_directions(0.35355339059327373);
        REQUIRE(dirs.size() == 4);
        const std::set<std::pair<long long, long long>> expect{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
        std::set<std::pair<long long, long long>> got;
        for (const auto& v : dirs) got.insert({v.p, v.q});
        CHECK(got == expect);
    }
    SUBCASE("inradius 1/2 keeps only the axes") {
        const auto dirs = enumerate_candidate_directions(0.5);
        REQUIRE(dirs.size() == 2);
        CHECK(dirs[0].p * dirs[0].p + dirs[0].q * dirs[0].q == 1);
        CHECK(dirs[1].p * dirs[1].p + dirs[1].q * dirs[1].q == 1);
    }
    SUBCASE("inradius 0.1: brute-force coprime enumeration oracle") {
        const auto dirs = enumerate_candidate_directions(0.1);
        // independent oracle: all coprime canonical (p,q) with p^2+q^2 <= 25
        std::set<std::pair<long long, long long>> oracle;
        for (long long p = 0; p <= 5; ++p)
            for (long long q = -5; q <= 5; ++q) {
                if (p == 0 && q <= 0) continue;
                if (p < 0) continue;
                if (p == 0 && q != 1) continue;
                if (p * p + q * q > 25) continue;
                if (std::gcd(p, std::abs(q)) != 1) continue;
                oracle.insert({p, q});
            }
        std::set<std::pair<long long, long long>> got;
        for (const auto& v : dirs) got.insert({v.p, v.q});
        CHECK(got == oracle);
        CHECK(got.count({3, 4}) == 1);
        CHECK(got.count({2, 2}) == 0);
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(enumerate_candidate_directions(0.0), std::domain_error);
        CHECK_THROWS_AS(enumerate_candidate_directions(-0.2), std::domain_error);
        CHECK_THROWS_AS(enumerate_candidate_directions(0.7), std::domain_error);
    }
}

TEST_CASE("enumeration count bound and antitonicity") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uni(0.05, 0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const double eps = uni(rng);
        const auto dirs = enumerate_candidate_directions(eps);
        CHECK(2.0 * static_cast<double>(dirs.size()) <= 1.0 / (eps * eps) + 1e-9);
        for (const auto& v : dirs)
            CHECK(static_cast<double>(v.p * v.p + v.q * v.q) <= 1.0 / (4 * eps * eps) * (1 + 1e-9));
    }
    // antitone: larger inradius -> subset
    const auto small = enumerate_candidate_directions(0.28);
    const auto large = enumerate_candidate_directions(0.12);
    for (const auto& v : small)
        CHECK(std::find(large.begin(), large.end(), v) != large.end());
}

TEST_CASE("geodesic sampling") {
    SUBCASE("horizontal line") {
        const DirectionFrame frame{RationalDirection{1, 0}};
        const auto pts = geodesic_sample(frame, 0.25, 4);
        REQUIRE(pts.size() == 4);
        CHECK(pts[0].x == doctest::Approx(0.0));
        CHECK(pts[0].y == doctest::Approx(0.25));
        CHECK(pts[2].x == doctest::Approx(0.5));
        CHECK(pts[2].y == doctest::Approx(0.25));
    }
    SUBCASE("diagonal of period sqrt(2)") {
        const DirectionFrame frame{RationalDirection{1, 1}};
        const auto pts = geodesic_sample(frame, 0.0, 2);
        REQUIRE(pts.size() == 2);
        CHECK(torus_distance(pts[0], TorusPoint{0, 0}) < 1e-12);
        CHECK(torus_distance(pts[1], TorusPoint{0.5, 0.5}) < 1e-12);
    }
    SUBCASE("(1,2) line: distinct, evenly spread points") {
        const DirectionFrame frame{RationalDirection{1, 2}};
        const auto pts = geodesic_sample(frame, 0.3, 10);
        const double min_gap = std::sqrt(5.0) / 10.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                CHECK(torus_distance(pts[i], pts[j]) >= min_gap - 1e-9);
    }
    SUBCASE("shift invariance of the sample set") {
        const DirectionFrame frame{RationalDirection{1, 2}};
        const auto pts = geodesic_sample(frame, 0.1, 8);
        const double shift = frame.t_circumference() / 8.0;
        for (const auto& p : pts) {
            const TorusPoint q = p.translated(frame.direction.unit() * shift);
            double best = 1.0;
            for (const auto& r : pts) best = std::min(best, torus_distance(q, r));
            CHECK(best < 1e-12);
        }
    }
    CHECK_THROWS_AS(geodesic_sample(DirectionFrame{RationalDirection{1, 0}}, 0.0, 1),
                    std::domain_error);
}
