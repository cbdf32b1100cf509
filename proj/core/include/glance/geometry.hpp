#pragma once

#include <cmath>
#include <compare>

namespace glance {

/// Plain 2D vector, double precision. Used both for free vectors and for
/// planar lifts of torus points.
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(Vec2 r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(Vec2 r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    friend constexpr Vec2 operator*(double s, Vec2 v) { return {v.x * s, v.y * s}; }
    Vec2& operator+=(Vec2 r) { x += r.x; y += r.y; return *this; }
    Vec2& operator-=(Vec2 r) { x -= r.x; y -= r.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }

    constexpr double dot(Vec2 r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product; vanishes iff parallel.
    constexpr double cross(Vec2 r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    /// Counterclockwise quarter turn.
    constexpr Vec2 perp() const { return {-y, x}; }
    Vec2 normalized() const {
        const double n = norm();
        return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }

    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline Vec2 rotate(Vec2 v, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

/// Reduce a real to the fundamental interval [0, 1).
inline double wrap_unit(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // guards x = -1e-17 style results
    return r;
}

/// Signed representative of x modulo 1 in [-1/2, 1/2).
inline double wrap_symmetric(double x) {
    return x - std::floor(x + 0.5);
}

/// A point on the flat torus R^2/Z^2, stored in fundamental-domain
/// coordinates. Construction always reduces mod 1.
struct TorusPoint {
    double x{0.0};
    double y{0.0};

    TorusPoint() = default;
    TorusPoint(double x_, double y_) : x(wrap_unit(x_)), y(wrap_unit(y_)) {}
    explicit TorusPoint(Vec2 v) : TorusPoint(v.x, v.y) {}

    Vec2 vec() const { return {x, y}; }
    TorusPoint translated(Vec2 d) const { return {x + d.x, y + d.y}; }
};

/// Torus metric: length of the shortest representative of the difference.
/// Equivalent to minimizing over the 3x3 block of lattice translates.
inline double torus_distance(TorusPoint a, TorusPoint b) {
    return std::hypot(wrap_symmetric(a.x - b.x), wrap_symmetric(a.y - b.y));
}

/// Distance between two parameters on a circle of given circumference.
inline double circle_distance(double a, double b, double circumference) {
    double d = std::fabs(a - b);
    d -= circumference * std::floor(d / circumference);
    return std::min(d, circumference - d);
}

}  // namespace glance
