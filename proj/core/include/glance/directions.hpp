#pragma once

#include <cstdint>
#include <vector>

#include "glance/geometry.hpp"

namespace glance {

/// A rational direction on the torus, i.e. a primitive lattice vector (p, q)
/// up to sign. Canonical half-circle representative: p > 0, or p = 0 and
/// q > 0. Geodesics in this direction close up with period sqrt(p^2 + q^2).
struct RationalDirection {
    std::int64_t p{1};
    std::int64_t q{0};

    RationalDirection() = default;
    /// Canonicalizes sign and checks coprimality (throws std::domain_error).
    RationalDirection(std::int64_t p_, std::int64_t q_);

    double period() const;                 // T_v = sqrt(p^2 + q^2)
    Vec2 unit() const;                     // (p, q) / T_v
    Vec2 perp_unit() const;                // (-q, p) / T_v
    double angle() const;                  // atan2(q, p), in (-pi/2, pi/2]

    /// The vector (-q, p) / T_v^2. Orthogonal to the direction, norm 1/T_v,
    /// and translates every geodesic of this direction onto itself.
    Vec2 transverse_step() const;

    friend bool operator==(const RationalDirection&, const RationalDirection&) = default;
    friend auto operator<=>(const RationalDirection&, const RationalDirection&) = default;
};

/// Transverse/longitudinal coordinates attached to one rational direction.
/// A point z decomposes as z = s * perp_unit + t * unit; s lives on a circle
/// of circumference 1/T_v and t on a circle of circumference T_v.
struct DirectionFrame {
    RationalDirection direction;

    explicit DirectionFrame(RationalDirection v) : direction(v) {}

    double s_circumference() const { return 1.0 / direction.period(); }
    double t_circumference() const { return direction.period(); }

    /// Point at transverse offset s and longitudinal position t.
    TorusPoint point(double s, double t) const {
        const Vec2 z = direction.perp_unit() * s + direction.unit() * t;
        return TorusPoint{z};
    }
    /// Transverse coordinate of a point, reduced to [0, s_circumference).
    double s_of(TorusPoint z) const;
    /// Longitudinal coordinate, reduced to [0, t_circumference).
    double t_of(TorusPoint z) const;
};

/// All canonical coprime directions whose geodesic period satisfies
/// T_v <= 1/(2 * inradius), i.e. the directions that can possibly carry
/// geodesics missing an open ball of the given radius. Exact integer
/// enumeration; a 1e-9 relative guard keeps boundary cases p^2 + q^2 =
/// floor(1/(4 eps^2)) included despite floating-point threshold rounding.
/// Requires inradius in (0, 1/2]; throws std::domain_error otherwise.
std::vector<RationalDirection> enumerate_candidate_directions(double inradius);

/// n equally spaced points along one full period of the geodesic at
/// transverse offset s. Requires n >= 2.
std::vector<TorusPoint> geodesic_sample(const DirectionFrame& frame, double s, int n);

}  // namespace glance
