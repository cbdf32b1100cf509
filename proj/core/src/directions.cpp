#include "glance/directions.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace glance {

RationalDirection::RationalDirection(std::int64_t p_, std::int64_t q_) : p(p_), q(q_) {
    if (p == 0 && q == 0) throw std::domain_error("rational direction: zero vector");
    if (p < 0 || (p == 0 && q < 0)) { p = -p; q = -q; }
    if (std::gcd(std::llabs(p), std::llabs(q)) != 1)
        throw std::domain_error("rational direction: components not coprime");
}

double RationalDirection::period() const {
    return std::sqrt(static_cast<double>(p * p + q * q));
}

Vec2 RationalDirection::unit() const {
    const double T = period();
    return {static_cast<double>(p) / T, static_cast<double>(q) / T};
}

Vec2 RationalDirection::perp_unit() const {
    const double T = period();
    return {-static_cast<double>(q) / T, static_cast<double>(p) / T};
}

double RationalDirection::angle() const {
    return std::atan2(static_cast<double>(q), static_cast<double>(p));
}

Vec2 RationalDirection::transverse_step() const {
    const double T2 = static_cast<double>(p * p + q * q);
    return {-static_cast<double>(q) / T2, static_cast<double>(p) / T2};
}

double DirectionFrame::s_of(TorusPoint z) const {
    const double c = s_circumference();
    const double s = z.vec().dot(direction.perp_unit());
    double r = s - c * std::floor(s / c);
    if (r >= c) r = 0.0;
    return r;
}

double DirectionFrame::t_of(TorusPoint z) const {
    const double c = t_circumference();
    const double t = z.vec().dot(direction.unit());
    double r = t - c * std::floor(t / c);
    if (r >= c) r = 0.0;
    return r;
}

std::vector<RationalDirection> enumerate_candidate_directions(double inradius) {
    if (!(inradius > 0.0) || inradius > 0.5)
        throw std::domain_error("enumerate_candidate_directions: inradius must be in (0, 1/2]");

    // Period bound T_v <= 1/(2 eps)  <=>  p^2 + q^2 <= 1/(4 eps^2).
    const long double bound = 1.0L / (4.0L * static_cast<long double>(inradius) * inradius);
    const auto max_norm2 = static_cast<std::int64_t>(std::floor(bound * (1.0L + 1e-9L)));

    std::vector<RationalDirection> out;
    const auto pmax = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<long double>(max_norm2))));
    for (std::int64_t p = 0; p <= pmax; ++p) {
        for (std::int64_t q = (p == 0 ? 1 : -pmax); q <= pmax; ++q) {
            if (p * p + q * q > max_norm2) continue;
            if (p == 0 && q != 1) continue;  // canonical vertical is (0, 1)
            if (std::gcd(std::llabs(p), std::llabs(q)) != 1) continue;
            out.emplace_back(p, q);
        }
    }
    return out;
}

std::vector<TorusPoint> geodesic_sample(const DirectionFrame& frame, double s, int n) {
    if (n < 2) throw std::domain_error("geodesic_sample: need n >= 2");
    std::vector<TorusPoint> pts;
    pts.reserve(static_cast<std::size_t>(n));
    const double T = frame.t_circumference();
    for (int k = 0; k < n; ++k)
        pts.push_back(frame.point(s, T * static_cast<double>(k) / n));
    return pts;
}

}  // namespace glance
