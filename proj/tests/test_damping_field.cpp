#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "glance/damping_field.hpp"

using namespace glance;

namespace {
const Vec2 kCenter{0.5, 0.5};
const double kDiskR = 0.35355339059327373;
}  // namespace

TEST_CASE("W vanishes outside and equals d^beta inside") {
    const DampingField field(make_disk(kCenter, kDiskR), 2.0);
    CHECK(field.evaluate(TorusPoint{0.95, 0.1}) == 0.0);
    CHECK(field.evaluate(TorusPoint{0.5, 0.5}) ==
          doctest::Approx(kDiskR * kDiskR).epsilon(1e-12));
    // strip with beta = 9 at distance 0.1 from the edge
    const DampingField strip_field(make_strip(RationalDirection{1, 0}, 0.2, 0.8), 9.0);
    CHECK(strip_field.evaluate(TorusPoint{0.3, 0.4}) == doctest::Approx(1e-9).epsilon(1e-9));
}

TEST_CASE("override exponent switches hard inside its radius") {
    const TorusPoint top{0.5, 0.5 + kDiskR};
    DampingField field(make_disk(kCenter, kDiskR), 2.0, {{top, 3.0, 0.05}});
    const TorusPoint inside_near{0.5, 0.5 + kDiskR - 0.01};
    CHECK(field.exponent_at(inside_near) == 3.0);
    CHECK(field.evaluate(inside_near) == doctest::Approx(std::pow(0.01, 3.0)).epsilon(1e-9));
    CHECK(field.exponent_at(TorusPoint{0.5, 0.5}) == 2.0);
}

TEST_CASE("support cutoff saturates smoothly away from the boundary") {
    const DampingField field(make_disk(kCenter, kDiskR), 2.0, {}, 0.05);
    const double w_center = field.evaluate(TorusPoint{0.5, 0.5});
    CHECK(w_center < 0.05 * 0.05 + 1e-12);
    const TorusPoint near{0.5, 0.5 + kDiskR - 1e-3};
    CHECK(field.evaluate(near) == doctest::Approx(1e-6).epsilon(1e-3));
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(DampingField(make_disk(kCenter, 0.2), -1.0), std::domain_error);
    CHECK_THROWS_AS(DampingField(make_disk(kCenter, 0.2), 1.0, {{TorusPoint{0, 0}, 0.0, 0.1}}),
                    std::domain_error);
}

TEST_CASE("regularity sampling: bounded for large beta, divergent for small") {
    const DampingField smooth(make_disk(kCenter, 0.3), 9.0);
    const auto r1 = regularity_check(smooth, 400, 7, 1e-4);
    const auto r2 = regularity_check(smooth, 400, 7, 5e-5);
    CHECK(r1.max_ratio < 50.0);
    CHECK(r2.max_ratio < 1.5 * r1.max_ratio + 1.0);

    // the ratio explodes as samples approach the boundary (low W threshold)
    const DampingField rough(make_disk(kCenter, 0.3), 0.5);
    const auto b_far = regularity_check(rough, 400, 7, 1e-5, 0.3);
    const auto b_near = regularity_check(rough, 400, 7, 1e-5, 1e-9);
    CHECK(b_near.max_ratio > 10.0 * b_far.max_ratio);
    CHECK(b_near.max_ratio > 1e3);

    CHECK_THROWS_AS(regularity_check(smooth, 50), std::domain_error);
}
