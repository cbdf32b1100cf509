#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "glance/directions.hpp"
#include "glance/geometry.hpp"

namespace glance {

/// Closed planar curve given by a parametrization over [0, 1) with first and
/// second derivatives. Speed must never vanish. Factories cover the analytic
/// families used throughout; arbitrary curves come in as sample tables.
class SmoothCurve {
  public:
    using Fn = std::function<Vec2(double)>;

    SmoothCurve(Fn gamma, Fn dgamma, Fn ddgamma, std::string kind);

    /// Curve through a dense table of (position, velocity, acceleration)
    /// rows at uniform parameters; evaluated by periodic cubic Hermite
    /// interpolation of positions, linear interpolation of acceleration.
    static SmoothCurve from_samples(std::vector<Vec2> pos, std::vector<Vec2> vel,
                                    std::vector<Vec2> acc);
    static SmoothCurve circle(Vec2 center, double radius);
    static SmoothCurve ellipse(Vec2 center, double a, double b, double tilt = 0.0);
    /// |x/a|^m + |y/b|^m = 1 boundary for even integer m >= 2 (smooth
    /// radial parametrization).
    static SmoothCurve superellipse(Vec2 center, double a, double b, int m);

    Vec2 position(double t) const { return gamma_(t); }
    Vec2 velocity(double t) const { return dgamma_(t); }
    Vec2 acceleration(double t) const { return ddgamma_(t); }

    /// Parametrization-invariant curvature
    /// sqrt(|g''|^2 |g'|^2 - (g''.g')^2) / |g'|^3; throws on vanishing speed.
    double curvature(double t) const;

    /// Rigid rotation about a pivot (defaults to the curve's sample
    /// centroid), staying within the same parameter domain.
    SmoothCurve rotated(double angle, std::optional<Vec2> pivot = std::nullopt) const;

    const std::string& kind() const { return kind_; }
    const std::vector<Vec2>& dense_boundary() const { return dense_; }
    Vec2 sample_centroid() const { return centroid_; }
    /// True when the parametrization runs counterclockwise.
    bool counterclockwise() const { return ccw_; }

  private:
    Fn gamma_, dgamma_, ddgamma_;
    std::string kind_;
    std::vector<Vec2> dense_;  // cached positions at 4096 uniform parameters
    Vec2 centroid_;
    bool ccw_{true};
    void build_cache();
};

struct PolygonShape {
    /// Oriented edge vectors v_1..v_n, summing to zero, all nonzero.
    std::vector<Vec2> edges;
    /// First vertex; remaining vertices are prefix sums of the edges.
    Vec2 anchor{0.0, 0.0};
    /// When the polygon was authored with exact rational edge coordinates,
    /// numerator/denominator pairs enable exact direction matching.
    std::optional<std::vector<std::array<std::int64_t, 4>>> rational_edges;
    /// Vertex list, cached by the factory.
    std::shared_ptr<const std::vector<Vec2>> cached_vertices;

    std::vector<Vec2> vertices() const;
};

/// Edge-pair intersection test for simple (non-self-intersecting) polygons.
bool polygon_is_simple(const PolygonShape& poly);

struct DiskShape {
    Vec2 center{0.5, 0.5};
    double radius{0.25};
};

struct SuperEllipseShape {
    Vec2 center{0.5, 0.5};
    double a{0.25}, b{0.25};
    double m{4.0}, n{4.0};
    /// Boundary table at uniform theta, built by the factory.
    std::shared_ptr<const std::vector<Vec2>> dense;
};

/// Boundary point of a superellipse at parameter theta in [0, 2pi).
Vec2 superellipse_boundary_point(const SuperEllipseShape& se, double theta);

struct CurveShape {
    std::shared_ptr<const SmoothCurve> curve;  // boundary, positively oriented
};

/// Region invariant along the axis perpendicular to `normal`:
/// { z : <z,(p,q)>/T mod 1/T lies in (lo, hi) }. The complement-of-a-geodesic
/// configuration is the special case hi - lo = 1/T.
struct StripShape {
    RationalDirection normal{1, 0};
    double lo{0.0}, hi{0.5};
};

struct DampingShape;
struct UnionShape {
    std::vector<std::shared_ptr<const DampingShape>> parts;
};

/// Geometric damping region on the torus. All queries are const and
/// reentrant; construct once, share freely.
struct DampingShape {
    std::variant<PolygonShape, DiskShape, SuperEllipseShape, CurveShape, StripShape, UnionShape> v;

    /// True iff z lies in the open region; boundary points (within the shape
    /// family's tolerance) report false.
    bool contains(TorusPoint z) const;

    /// Torus distance from z to the boundary of the region, from either side.
    double boundary_distance(TorusPoint z) const;

    /// dist(z, complement): boundary_distance inside, 0 outside.
    double distance_to_complement(TorusPoint z) const;

    /// Signed distance: positive inside, negative outside.
    double signed_distance(TorusPoint z) const;

    /// Largest inscribed-ball radius, by coarse-to-fine maximization of
    /// distance_to_complement. `value` is achieved (a certified lower
    /// bound); `upper_bound` adds the Lipschitz slack of the full grid.
    struct Inradius {
        double value{0.0};
        double upper_bound{0.0};
        TorusPoint argmax;
    };
    Inradius inradius() const;

    /// True if the closure embeds injectively in the torus: diameter < 1
    /// shortcut, else a translate-overlap test on the 3x3 block. Strips are
    /// periodic by construction and always pass.
    bool properly_projected() const;

    /// Upper bound for the planar diameter of the closure.
    double diameter_upper_bound() const;

    /// Dense boundary sample points (planar coordinates of the reference
    /// lift). Used for shadows, seeds, and projection checks.
    std::vector<Vec2> boundary_samples(int count) const;

    /// Planar boundary points within `radius` of a target point of the
    /// reference lift, clustered geometrically toward the closest approach.
    /// Used for local order fitting around a glancing point.
    std::vector<Vec2> boundary_points_near(Vec2 target, double radius, int count) const;

    /// Support value max{ <z, u> : z in closure } over the reference planar
    /// lift. Not defined for strips (unbounded); throws std::domain_error.
    double support(Vec2 u) const;

    /// A planar lift of the region: a reference point guaranteed inside.
    Vec2 reference_interior_point() const;

    bool is_strip() const { return std::holds_alternative<StripShape>(v); }
    bool is_union() const { return std::holds_alternative<UnionShape>(v); }
};

DampingShape make_polygon(std::vector<Vec2> edges, Vec2 anchor);
DampingShape make_polygon_from_vertices(const std::vector<Vec2>& vertices);
DampingShape make_disk(Vec2 center, double radius);
DampingShape make_superellipse(Vec2 center, double a, double b, double m, double n);
DampingShape make_curve(SmoothCurve curve);
DampingShape make_strip(RationalDirection normal, double lo, double hi);
DampingShape make_union(std::vector<DampingShape> parts);

/// Rotates a bounded shape about a pivot (default: its inradius argmax is
/// NOT used — the pivot defaults to the centroid of boundary samples).
/// Strips cannot be rotated; throws std::domain_error.
DampingShape rotated_shape(const DampingShape& shape, double angle,
                           std::optional<Vec2> pivot = std::nullopt);

/// Translates a shape by a vector on the torus.
DampingShape translated_shape(const DampingShape& shape, Vec2 delta);

}  // namespace glance
