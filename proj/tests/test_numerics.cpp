#include <doctest.h>

#include <cmath>
#include <vector>

#include "glance/numerics.hpp"

using namespace glance;

TEST_CASE("adaptive quadrature on smooth and kinked integrands") {
    const auto q1 = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, 3.14159265358979);
    CHECK(q1.value == doctest::Approx(2.0 - std::cos(3.14159265358979) - 1.0).epsilon(1e-12));
    // |x - 0.3|^1.5 has a kink; adaptive splitting should still converge
    const auto q2 = integrate_adaptive(
        [](double x) { return std::pow(std::fabs(x - 0.3), 1.5); }, 0.0, 1.0, 1e-12);
    const double exact = (std::pow(0.3, 2.5) + std::pow(0.7, 2.5)) / 2.5;
    CHECK(q2.value == doctest::Approx(exact).epsilon(1e-10));
    CHECK(q2.converged);
}

TEST_CASE("bisection and golden section") {
    const double root = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
    CHECK(root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
    const auto [xm, fm] = golden_minimize(
        [](double x) { return (x - 0.7) * (x - 0.7) + 1.5; }, -1.0, 2.0, 1e-11);
    CHECK(xm == doctest::Approx(0.7).epsilon(1e-8));
    CHECK(fm == doctest::Approx(1.5));
}

TEST_CASE("line fits recover synthetic slopes") {
    std::vector<double> x, y;
    for (int i = 1; i <= 20; ++i) {
        x.push_back(0.1 * i);
        y.push_back(3.5 * 0.1 * i - 0.25);
    }
    const LineFit f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(-0.25).epsilon(1e-10));

    std::vector<double> lx, ly;
    for (int k = 0; k < 12; ++k) {
        const double xv = std::pow(0.5, k);
        lx.push_back(xv);
        ly.push_back(2.0 * std::pow(xv, 2.75));
    }
    CHECK(fit_loglog(lx, ly).slope == doctest::Approx(2.75).epsilon(1e-10));
}

TEST_CASE("stabilized slope detects power laws with contaminated heads") {
    std::vector<double> x, y;
    for (int k = 0; k < 14; ++k) {
        const double xv = std::pow(0.5, k);
        // slope 3 asymptotically, contaminated by a higher-order term at large x
        x.push_back(xv);
        y.push_back(std::pow(xv, 3.0) * (1.0 + 2.0 * xv));
    }
    std::reverse(x.begin(), x.end());
    std::reverse(y.begin(), y.end());
    const StabilizedSlope s = stabilized_loglog_slope(x, y, 4, 3, 0.05);
    REQUIRE(s.slope.has_value());
    CHECK(*s.slope == doctest::Approx(3.0).epsilon(0.02));
}
