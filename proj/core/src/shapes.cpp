#include "glance/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "glance/numerics.hpp"

namespace glance {
namespace {

constexpr double kAnalyticBoundaryTol = 1e-10;  // polygon / disk / superellipse / strip
constexpr double kSampledBoundaryTol = 1e-8;    // sampled smooth curves

double sgnpow(double u, double e) {
    if (u == 0.0) return 0.0;
    return (u > 0.0 ? 1.0 : -1.0) * std::pow(std::fabs(u), e);
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double len2 = ab.norm2();
    if (len2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + ab * t)).norm();
}

struct Box {
    Vec2 lo{0.0, 0.0};
    Vec2 hi{1.0, 1.0};
    void expand(Vec2 p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
};

Box box_of(const std::vector<Vec2>& pts, double slack = 0.0) {
    Box b{pts.front(), pts.front()};
    for (const Vec2& p : pts) b.expand(p);
    b.lo -= Vec2{slack, slack};
    b.hi += Vec2{slack, slack};
    return b;
}

/// Try to recover x as an exactly-representable small rational a/b.
std::optional<std::pair<std::int64_t, std::int64_t>> rationalize(double x) {
    constexpr std::int64_t kMaxDen = 1 << 20;
    double v = x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int it = 0; it < 64; ++it) {
        const double fl = std::floor(v);
        if (std::fabs(fl) > 1e15) break;
        const auto a = static_cast<std::int64_t>(fl);
        const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > kMaxDen) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (q1 != 0 && static_cast<double>(p1) / static_cast<double>(q1) == x)
            return std::make_pair(p1, q1);
        const double frac = v - fl;
        if (frac == 0.0) break;
        v = 1.0 / frac;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Per-variant planar queries. Points are planar lifts; each shape stores one
// reference lift and queries loop over lattice translates chosen from the
// shape's bounding box.
// ---------------------------------------------------------------------------

bool polygon_parity_inside(const std::vector<Vec2>& vtx, Vec2 p) {
    bool inside = false;
    const std::size_t n = vtx.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& vi = vtx[i];
        const Vec2& vj = vtx[j];
        if ((vi.y > p.y) != (vj.y > p.y)) {
            const double xi = vj.x + (p.y - vj.y) / (vi.y - vj.y) * (vi.x - vj.x);
            if (p.x < xi) inside = !inside;
        }
    }
    return inside;
}

double polygon_boundary_distance(const std::vector<Vec2>& vtx, Vec2 p) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = vtx.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        best = std::min(best, point_segment_distance(p, vtx[j], vtx[i]));
    return best;
}

double superellipse_level(const SuperEllipseShape& se, Vec2 p) {
    const double u = std::fabs((p.x - se.center.x) / se.a);
    const double w = std::fabs((p.y - se.center.y) / se.b);
    return std::pow(u, se.m) + std::pow(w, se.n);
}

/// Nearest-boundary search seeded by a dense table, refined by golden
/// section over the continuous parametrization.
template <typename PosFn>
double refine_boundary_distance(const std::vector<Vec2>& dense, const PosFn& pos, Vec2 p,
                                double period) {
    const std::size_t n = dense.size();
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d2 = (dense[i] - p).norm2();
        if (d2 < best) {
            best = d2;
            best_i = i;
        }
    }
    const double h = period / static_cast<double>(n);
    const double t0 = static_cast<double>(best_i) * h;
    const auto obj = [&](double t) { return (pos(t) - p).norm2(); };
    const auto [tm, vm] = golden_minimize(obj, t0 - 1.5 * h, t0 + 1.5 * h, 1e-13 * period);
    (void)tm;
    return std::sqrt(std::min(vm, best));
}

template <typename PosFn>
double refine_boundary_param(const std::vector<Vec2>& dense, const PosFn& pos, Vec2 p,
                             double period) {
    const std::size_t n = dense.size();
    std::size_t best_i = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double d2 = (dense[i] - p).norm2();
        if (d2 < best) {
            best = d2;
            best_i = i;
        }
    }
    const double h = period / static_cast<double>(n);
    const double t0 = static_cast<double>(best_i) * h;
    const auto obj = [&](double t) { return (pos(t) - p).norm2(); };
    return golden_minimize(obj, t0 - 1.5 * h, t0 + 1.5 * h, 1e-13 * period).first;
}

}  // namespace

// ---------------------------------------------------------------------------
// SmoothCurve
// ---------------------------------------------------------------------------

SmoothCurve::SmoothCurve(Fn gamma, Fn dgamma, Fn ddgamma, std::string kind)
    : gamma_(std::move(gamma)),
      dgamma_(std::move(dgamma)),
      ddgamma_(std::move(ddgamma)),
      kind_(std::move(kind)) {
    build_cache();
}

void SmoothCurve::build_cache() {
    constexpr int kDense = 4096;
    dense_.resize(kDense);
    Vec2 sum{0.0, 0.0};
    for (int i = 0; i < kDense; ++i) {
        dense_[i] = gamma_(static_cast<double>(i) / kDense);
        sum += dense_[i];
    }
    centroid_ = sum / static_cast<double>(kDense);
    double area2 = 0.0;
    for (int i = 0; i < kDense; ++i) area2 += dense_[i].cross(dense_[(i + 1) % kDense]);
    ccw_ = area2 > 0.0;
}

double SmoothCurve::curvature(double t) const {
    const Vec2 d1 = dgamma_(t);
    const Vec2 d2 = ddgamma_(t);
    const double speed2 = d1.norm2();
    if (!(speed2 > 0.0)) throw std::domain_error("SmoothCurve::curvature: vanishing speed");
    const double num2 = d2.norm2() * speed2 - d2.dot(d1) * d2.dot(d1);
    return std::sqrt(std::max(0.0, num2)) / (speed2 * std::sqrt(speed2));
}

SmoothCurve SmoothCurve::rotated(double angle, std::optional<Vec2> pivot) const {
    const Vec2 c = pivot.value_or(centroid_);
    const Fn g = gamma_, dg = dgamma_, ddg = ddgamma_;
    return SmoothCurve(
        [g, c, angle](double t) { return c + rotate(g(t) - c, angle); },
        [dg, angle](double t) { return rotate(dg(t), angle); },
        [ddg, angle](double t) { return rotate(ddg(t), angle); }, kind_ + "/rotated");
}

SmoothCurve SmoothCurve::circle(Vec2 center, double radius) {
    using std::numbers::pi;
    return SmoothCurve(
        [=](double t) {
            const double a = 2 * pi * t;
            return center + Vec2{radius * std::cos(a), radius * std::sin(a)};
        },
        [=](double t) {
            const double a = 2 * pi * t;
            return Vec2{-radius * std::sin(a), radius * std::cos(a)} * (2 * pi);
        },
        [=](double t) {
            const double a = 2 * pi * t;
            return Vec2{-radius * std::cos(a), -radius * std::sin(a)} * (4 * pi * pi);
        },
        "circle");
}

SmoothCurve SmoothCurve::ellipse(Vec2 center, double a, double b, double tilt) {
    using std::numbers::pi;
    return SmoothCurve(
        [=](double t) {
            const double u = 2 * pi * t;
            return center + rotate({a * std::cos(u), b * std::sin(u)}, tilt);
        },
        [=](double t) {
            const double u = 2 * pi * t;
            return rotate({-a * std::sin(u), b * std::cos(u)}, tilt) * (2 * pi);
        },
        [=](double t) {
            const double u = 2 * pi * t;
            return rotate({-a * std::cos(u), -b * std::sin(u)}, tilt) * (4 * pi * pi);
        },
        "ellipse");
}

SmoothCurve SmoothCurve::superellipse(Vec2 center, double a, double b, int m) {
    if (m < 2 || m % 2 != 0)
        throw std::domain_error("SmoothCurve::superellipse: exponent must be even and >= 2");
    using std::numbers::pi;
    // Radial form r(phi) (cos, sin) with r = g^{-1/m},
    // g(phi) = (cos/a)^m + (sin/b)^m; smooth because m is even.
    const double em = static_cast<double>(m);
    const auto g012 = [a, b, em](double phi) {
        const double c = std::cos(phi), s = std::sin(phi);
        const double ca = c / a, sb = s / b;
        const double g = std::pow(std::fabs(ca), em) + std::pow(std::fabs(sb), em);
        const double dca = -s / a, dsb = c / b;
        const double g1 = em * (sgnpow(ca, em - 1) * dca + sgnpow(sb, em - 1) * dsb);
        const double g2 = em * (em - 1) *
                              (std::pow(std::fabs(ca), em - 2) * dca * dca +
                               std::pow(std::fabs(sb), em - 2) * dsb * dsb) +
                          em * (sgnpow(ca, em - 1) * (-c / a) + sgnpow(sb, em - 1) * (-s / b));
        return std::array<double, 3>{g, g1, g2};
    };
    const auto radial = [g012, em](double phi) {
        const auto [g, g1, g2] = g012(phi);
        const double r = std::pow(g, -1.0 / em);
        const double r1 = -r / em * g1 / g;
        const double r2 = r / em * ((1.0 / em + 1.0) * g1 * g1 / (g * g) - g2 / g);
        return std::array<double, 3>{r, r1, r2};
    };
    return SmoothCurve(
        [=](double t) {
            const double phi = 2 * pi * t;
            const auto [r, r1, r2] = radial(phi);
            (void)r1; (void)r2;
            return center + Vec2{r * std::cos(phi), r * std::sin(phi)};
        },
        [=](double t) {
            const double phi = 2 * pi * t;
            const auto [r, r1, r2] = radial(phi);
            (void)r2;
            const double c = std::cos(phi), s = std::sin(phi);
            return Vec2{r1 * c - r * s, r1 * s + r * c} * (2 * pi);
        },
        [=](double t) {
            const double phi = 2 * pi * t;
            const auto [r, r1, r2] = radial(phi);
            const double c = std::cos(phi), s = std::sin(phi);
            return Vec2{(r2 - r) * c - 2 * r1 * s, (r2 - r) * s + 2 * r1 * c} * (4 * pi * pi);
        },
        "superellipse");
}

SmoothCurve SmoothCurve::from_samples(std::vector<Vec2> pos, std::vector<Vec2> vel,
                                      std::vector<Vec2> acc) {
    const std::size_t n = pos.size();
    if (n < 8 || vel.size() != n || acc.size() != n)
        throw std::domain_error("SmoothCurve::from_samples: need >= 8 aligned rows");
    auto table = std::make_shared<std::array<std::vector<Vec2>, 3>>(
        std::array<std::vector<Vec2>, 3>{std::move(pos), std::move(vel), std::move(acc)});
    const double h = 1.0 / static_cast<double>(n);

    const auto hermite = [table, h, n](double t) {
        const double u = (t - std::floor(t)) * static_cast<double>(n);
        const auto i = static_cast<std::size_t>(u) % n;
        const std::size_t j = (i + 1) % n;
        const double x = u - std::floor(u);
        const auto& P = (*table)[0];
        const auto& V = (*table)[1];
        const double h00 = (1 + 2 * x) * (1 - x) * (1 - x);
        const double h10 = x * (1 - x) * (1 - x);
        const double h01 = x * x * (3 - 2 * x);
        const double h11 = x * x * (x - 1);
        return P[i] * h00 + V[i] * (h10 * h) + P[j] * h01 + V[j] * (h11 * h);
    };
    const auto lerp_row = [table, n](int row, double t) {
        const double u = (t - std::floor(t)) * static_cast<double>(n);
        const auto i = static_cast<std::size_t>(u) % n;
        const std::size_t j = (i + 1) % n;
        const double x = u - std::floor(u);
        const auto& R = (*table)[static_cast<std::size_t>(row)];
        return R[i] * (1 - x) + R[j] * x;
    };
    return SmoothCurve(hermite, [lerp_row](double t) { return lerp_row(1, t); },
                       [lerp_row](double t) { return lerp_row(2, t); }, "samples");
}

// ---------------------------------------------------------------------------
// PolygonShape
// ---------------------------------------------------------------------------

std::vector<Vec2> PolygonShape::vertices() const {
    if (cached_vertices) return *cached_vertices;
    std::vector<Vec2> vtx;
    vtx.reserve(edges.size());
    Vec2 p = anchor;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        vtx.push_back(p);
        p += edges[i];
    }
    vtx.push_back(p);
    return vtx;
}

bool polygon_is_simple(const PolygonShape& poly) {
    const auto vtx = poly.vertices();
    const std::size_t n = vtx.size();
    const auto seg = [&](std::size_t i) {
        return std::pair<Vec2, Vec2>{vtx[i], vtx[(i + 1) % n]};
    };
    const auto proper_cross = [](Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
        const double d1 = (b - a).cross(c - a);
        const double d2 = (b - a).cross(d - a);
        const double d3 = (d - c).cross(a - c);
        const double d4 = (d - c).cross(b - c);
        return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;  // adjacent share a vertex
            const auto [a, b] = seg(i);
            const auto [c, d] = seg(j);
            if (proper_cross(a, b, c, d)) return false;
        }
    return true;
}

Vec2 superellipse_boundary_point(const SuperEllipseShape& se, double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    return se.center + Vec2{se.a * sgnpow(c, 2.0 / se.m), se.b * sgnpow(s, 2.0 / se.n)};
}

// ---------------------------------------------------------------------------
// DampingShape dispatch
// ---------------------------------------------------------------------------

namespace {

Box shape_box(const DampingShape& shape);

struct PlanarQuery {
    bool inside{false};
    double boundary_dist{std::numeric_limits<double>::infinity()};
};

PlanarQuery planar_query(const PolygonShape& poly, Vec2 p) {
    const auto vtx = poly.vertices();
    return {polygon_parity_inside(vtx, p), polygon_boundary_distance(vtx, p)};
}

PlanarQuery planar_query(const DiskShape& d, Vec2 p) {
    const double r = (p - d.center).norm();
    return {r < d.radius, std::fabs(r - d.radius)};
}

PlanarQuery planar_query(const SuperEllipseShape& se, Vec2 p) {
    const double lvl = superellipse_level(se, p);
    const auto pos = [&](double th) { return superellipse_boundary_point(se, th); };
    const double bd =
        refine_boundary_distance(*se.dense, pos, p, 2 * std::numbers::pi);
    return {lvl < 1.0, bd};
}

PlanarQuery planar_query(const CurveShape& cs, Vec2 p) {
    const SmoothCurve& curve = *cs.curve;
    const auto pos = [&](double t) { return curve.position(t); };
    const double t = refine_boundary_param(curve.dense_boundary(), pos, p, 1.0);
    const Vec2 q = curve.position(t);
    const double bd = (p - q).norm();
    // Interior lies to the left of the velocity for counterclockwise curves;
    // the segment to the nearest boundary point cannot cross the boundary,
    // so the side test at the foot point decides containment.
    const double side = curve.velocity(t).cross(p - q);
    return {curve.counterclockwise() ? side > 0 : side < 0, bd};
}

double strip_coordinate(const StripShape& st, Vec2 p) {
    const double T = st.normal.period();
    const double c = p.dot({static_cast<double>(st.normal.p), static_cast<double>(st.normal.q)}) / T;
    const double circ = 1.0 / T;
    double r = c - circ * std::floor(c / circ);
    if (r >= circ) r = 0.0;
    return r;
}

double distance_to_box(Vec2 p, const Box& b) {
    const double dx = std::max({b.lo.x - p.x, 0.0, p.x - b.hi.x});
    const double dy = std::max({b.lo.y - p.y, 0.0, p.y - b.hi.y});
    return std::hypot(dx, dy);
}

/// Lattice translates of the query point that could interact with the
/// shape's reference lift, nearest-first.
std::vector<Vec2> candidate_lifts(Vec2 z, const Box& bb, double reach) {
    std::vector<std::pair<double, Vec2>> lifts;
    const auto ix0 = static_cast<int>(std::floor(bb.lo.x - z.x - reach));
    const auto ix1 = static_cast<int>(std::ceil(bb.hi.x - z.x + reach));
    const auto iy0 = static_cast<int>(std::floor(bb.lo.y - z.y - reach));
    const auto iy1 = static_cast<int>(std::ceil(bb.hi.y - z.y + reach));
    for (int ix = ix0; ix <= ix1; ++ix)
        for (int iy = iy0; iy <= iy1; ++iy) {
            const Vec2 p = z + Vec2{static_cast<double>(ix), static_cast<double>(iy)};
            lifts.emplace_back(distance_to_box(p, bb), p);
        }
    std::sort(lifts.begin(), lifts.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Vec2> out;
    out.reserve(lifts.size());
    for (const auto& [d, p] : lifts) out.push_back(p);
    return out;
}

}  // namespace

bool DampingShape::contains(TorusPoint z) const {
    return std::visit(
        [&](const auto& s) -> bool {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, StripShape>) {
                const double circ = 1.0 / s.normal.period();
                double c = strip_coordinate(s, z.vec()) - s.lo;
                c -= circ * std::floor(c / circ);
                return c > kAnalyticBoundaryTol && c < (s.hi - s.lo) - kAnalyticBoundaryTol;
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                for (const auto& part : s.parts)
                    if (part->contains(z)) return true;
                return false;
            } else {
                const double tol =
                    std::is_same_v<T, CurveShape> ? kSampledBoundaryTol : kAnalyticBoundaryTol;
                const Box bb = shape_box(*this);
                for (const Vec2& p : candidate_lifts(z.vec(), bb, 0.0)) {
                    if (distance_to_box(p, bb) > 0.0) break;  // sorted: rest are outside too
                    const PlanarQuery q = planar_query(s, p);
                    if (q.inside && q.boundary_dist > tol) return true;
                }
                return false;
            }
        },
        v);
}

double DampingShape::boundary_distance(TorusPoint z) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, StripShape>) {
                const double circ = 1.0 / s.normal.period();
                const double c = strip_coordinate(s, z.vec());
                return std::min(circle_distance(c, s.lo, circ),
                                circle_distance(c, s.hi, circ));
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                // Exact for pairwise-disjoint parts: inside -> the containing
                // part's boundary is for real; outside -> nearest part.
                bool inside = false;
                double inside_d = 0.0;
                double outside_d = std::numeric_limits<double>::infinity();
                for (const auto& part : s.parts) {
                    if (part->contains(z)) {
                        inside = true;
                        inside_d = std::max(inside_d, part->boundary_distance(z));
                    } else {
                        outside_d = std::min(outside_d, part->boundary_distance(z));
                    }
                }
                return inside ? inside_d : outside_d;
            } else {
                const Box bb = shape_box(*this);
                double best = std::numeric_limits<double>::infinity();
                for (const Vec2& p : candidate_lifts(z.vec(), bb, 1.0)) {
                    if (distance_to_box(p, bb) >= best) break;  // nearest-first
                    best = std::min(best, planar_query(s, p).boundary_dist);
                }
                return best;
            }
        },
        v);
}

double DampingShape::distance_to_complement(TorusPoint z) const {
    return contains(z) ? boundary_distance(z) : 0.0;
}

double DampingShape::signed_distance(TorusPoint z) const {
    const double bd = boundary_distance(z);
    return contains(z) ? bd : -bd;
}

DampingShape::Inradius DampingShape::inradius() const {
    if (const auto* d = std::get_if<DiskShape>(&v))
        return {d->radius, d->radius, TorusPoint{d->center}};
    if (const auto* s = std::get_if<StripShape>(&v)) {
        const double half = 0.5 * (s->hi - s->lo);
        const double mid = 0.5 * (s->lo + s->hi);
        const double T = s->normal.period();
        const Vec2 n{static_cast<double>(s->normal.p), static_cast<double>(s->normal.q)};
        return {half, half, TorusPoint{n * (mid / T)}};
    }

    // Coarse full grid (certifies the upper bound via the 1-Lipschitz
    // property of the distance), then local refinement for the achieved max.
    Box bb{{0.0, 0.0}, {1.0, 1.0}};
    if (!is_union() && !is_strip()) bb = shape_box(*this);
    const int n0 = 140;
    const double hx = (bb.hi.x - bb.lo.x) / n0;
    const double hy = (bb.hi.y - bb.lo.y) / n0;
    double best = -1.0;
    TorusPoint argmax;
    for (int i = 0; i <= n0; ++i)
        for (int j = 0; j <= n0; ++j) {
            const TorusPoint z{bb.lo.x + hx * i, bb.lo.y + hy * j};
            const double d = distance_to_complement(z);
            if (d > best) {
                best = d;
                argmax = z;
            }
        }
    if (best <= 0.0) throw std::domain_error("inradius: empty interior");
    const double slack = 0.5 * std::hypot(hx, hy);
    const double upper = best + slack;

    double cx = argmax.x, cy = argmax.y, span = std::max(hx, hy);
    for (int level = 0; level < 24; ++level) {
        double lbest = best;
        double bx = cx, by = cy;
        for (int i = -4; i <= 4; ++i)
            for (int j = -4; j <= 4; ++j) {
                const TorusPoint z{cx + span * i / 4.0, cy + span * j / 4.0};
                const double d = distance_to_complement(z);
                if (d > lbest) {
                    lbest = d;
                    bx = z.x;
                    by = z.y;
                }
            }
        best = lbest;
        cx = bx;
        cy = by;
        span *= 0.45;
        if (span < 1e-12) break;
    }
    return {best, upper, TorusPoint{cx, cy}};
}

double DampingShape::diameter_upper_bound() const {
    if (const auto* d = std::get_if<DiskShape>(&v)) return 2.0 * d->radius;
    if (is_strip()) return std::numeric_limits<double>::infinity();
    const auto samples = boundary_samples(512);
    double diam = 0.0;
    double gap = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        gap = std::max(gap, (samples[i] - samples[(i + 1) % samples.size()]).norm());
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            diam = std::max(diam, (samples[i] - samples[j]).norm());
    }
    return diam + 2.0 * gap;
}

bool DampingShape::properly_projected() const {
    if (is_strip()) return true;  // periodic in one direction by construction
    if (const auto* u = std::get_if<UnionShape>(&v)) {
        // Parts must inject individually and avoid each other's translates.
        for (const auto& part : u->parts)
            if (!part->properly_projected()) return false;
        for (std::size_t i = 0; i < u->parts.size(); ++i) {
            if (u->parts[i]->is_strip()) continue;
            for (const Vec2& p : u->parts[i]->boundary_samples(256))
                for (std::size_t j = 0; j < u->parts.size(); ++j) {
                    if (i == j) continue;
                    if (u->parts[j]->contains(TorusPoint{p})) return false;
                }
        }
        return true;
    }
    if (diameter_upper_bound() < 1.0) return true;

    const auto samples = boundary_samples(512);
    const Vec2 inner = reference_interior_point();
    for (int ix = -1; ix <= 1; ++ix)
        for (int iy = -1; iy <= 1; ++iy) {
            if (ix == 0 && iy == 0) continue;
            const Vec2 shift{static_cast<double>(ix), static_cast<double>(iy)};
            const auto hits = [&](Vec2 p) {
                const PlanarQuery q = std::visit(
                    [&](const auto& s) -> PlanarQuery {
                        using T = std::decay_t<decltype(s)>;
                        if constexpr (std::is_same_v<T, StripShape> ||
                                      std::is_same_v<T, UnionShape>)
                            return {};
                        else
                            return planar_query(s, p);
                    },
                    v);
                return q.inside || q.boundary_dist < 1e-9;
            };
            for (const Vec2& p : samples)
                if (hits(p + shift)) return false;
            if (hits(inner + shift)) return false;
        }
    return true;
}

std::vector<Vec2> DampingShape::boundary_samples(int count) const {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(count));
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                const auto vtx = s.vertices();
                double per = 0.0;
                for (std::size_t i = 0; i < vtx.size(); ++i)
                    per += (vtx[(i + 1) % vtx.size()] - vtx[i]).norm();
                for (std::size_t i = 0; i < vtx.size(); ++i) {
                    const Vec2 a = vtx[i];
                    const Vec2 b = vtx[(i + 1) % vtx.size()];
                    const int k = std::max(
                        1, static_cast<int>(std::round(count * (b - a).norm() / per)));
                    for (int j = 0; j < k; ++j)
                        out.push_back(a + (b - a) * (static_cast<double>(j) / k));
                }
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                for (int i = 0; i < count; ++i) {
                    const double a = 2 * std::numbers::pi * i / count;
                    out.push_back(s.center + Vec2{s.radius * std::cos(a), s.radius * std::sin(a)});
                }
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                for (int i = 0; i < count; ++i)
                    out.push_back(
                        superellipse_boundary_point(s, 2 * std::numbers::pi * i / count));
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                for (int i = 0; i < count; ++i)
                    out.push_back(s.curve->position(static_cast<double>(i) / count));
            } else if constexpr (std::is_same_v<T, StripShape>) {
                const double T_n = s.normal.period();
                const Vec2 npq{static_cast<double>(s.normal.p), static_cast<double>(s.normal.q)};
                const Vec2 axis = s.normal.perp_unit();
                for (double edge : {s.lo, s.hi})
                    for (int i = 0; i < count / 2; ++i)
                        out.push_back(npq * (edge / T_n) +
                                      axis * (T_n * i / std::max(1, count / 2)));
            } else {  // UnionShape
                for (const auto& part : s.parts) {
                    auto sub = part->boundary_samples(
                        std::max<int>(8, count / static_cast<int>(s.parts.size())));
                    out.insert(out.end(), sub.begin(), sub.end());
                }
            }
        },
        v);
    return out;
}

double DampingShape::support(Vec2 u) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                double best = -std::numeric_limits<double>::infinity();
                for (const Vec2& p : s.vertices()) best = std::max(best, p.dot(u));
                return best;
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                return s.center.dot(u) + s.radius * u.norm();
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                const auto obj = [&](double th) {
                    return -superellipse_boundary_point(s, th).dot(u);
                };
                double best = std::numeric_limits<double>::infinity();
                double arg = 0.0;
                const int n = static_cast<int>(s.dense->size());
                for (int i = 0; i < n; ++i) {
                    const double val = -(*s.dense)[i].dot(u);
                    if (val < best) {
                        best = val;
                        arg = 2 * std::numbers::pi * i / n;
                    }
                }
                const double h = 2 * std::numbers::pi / n;
                return -golden_minimize(obj, arg - 1.5 * h, arg + 1.5 * h, 1e-14).second;
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                const auto& dn = s.curve->dense_boundary();
                const auto obj = [&](double t) { return -s.curve->position(t).dot(u); };
                double best = std::numeric_limits<double>::infinity();
                double arg = 0.0;
                for (std::size_t i = 0; i < dn.size(); ++i) {
                    const double val = -dn[i].dot(u);
                    if (val < best) {
                        best = val;
                        arg = static_cast<double>(i) / static_cast<double>(dn.size());
                    }
                }
                const double h = 1.0 / static_cast<double>(dn.size());
                return -golden_minimize(obj, arg - 1.5 * h, arg + 1.5 * h, 1e-15).second;
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& part : s.parts) best = std::max(best, part->support(u));
                return best;
            } else {
                throw std::domain_error("support: not defined for strips");
            }
        },
        v);
}

Vec2 DampingShape::reference_interior_point() const {
    return std::visit(
        [&](const auto& s) -> Vec2 {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, DiskShape>) {
                return s.center;
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                return s.center;
            } else if constexpr (std::is_same_v<T, StripShape>) {
                const double mid = 0.5 * (s.lo + s.hi);
                const double T_n = s.normal.period();
                return Vec2{static_cast<double>(s.normal.p), static_cast<double>(s.normal.q)} *
                       (mid / T_n);
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                return s.parts.front()->reference_interior_point();
            } else {
                // Scanline midpoint: robust for non-convex polygons/curves.
                const auto samples = boundary_samples(1024);
                const Box bb = box_of(samples);
                const double ymid = 0.5 * (bb.lo.y + bb.hi.y) + 1e-7;
                std::vector<double> xs;
                for (std::size_t i = 0; i < samples.size(); ++i) {
                    const Vec2 a = samples[i];
                    const Vec2 b = samples[(i + 1) % samples.size()];
                    if ((a.y > ymid) != (b.y > ymid))
                        xs.push_back(a.x + (ymid - a.y) / (b.y - a.y) * (b.x - a.x));
                }
                std::sort(xs.begin(), xs.end());
                if (xs.size() >= 2) return {0.5 * (xs[0] + xs[1]), ymid};
                return 0.5 * (bb.lo + bb.hi);
            }
        },
        v);
}

std::vector<Vec2> DampingShape::boundary_points_near(Vec2 target, double radius,
                                                     int count) const {
    std::vector<Vec2> out;
    const auto push_if_near = [&](Vec2 p) {
        if ((p - target).norm() <= radius) out.push_back(p);
    };
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                const auto vtx = s.vertices();
                const std::size_t n = vtx.size();
                for (std::size_t i = 0; i < n; ++i) {
                    const Vec2 a = vtx[i], b = vtx[(i + 1) % n];
                    const Vec2 ab = b - a;
                    const double len = ab.norm();
                    const double t0 =
                        std::clamp((target - a).dot(ab) / (len * len), 0.0, 1.0);
                    push_if_near(a + ab * t0);
                    // geometric fan toward both ends of the edge
                    for (int k = 0; k < count; ++k) {
                        const double d = radius * std::pow(0.5, 0.25 * k);
                        for (double sgn : {1.0, -1.0}) {
                            const double t = t0 + sgn * d / len;
                            if (t >= 0.0 && t <= 1.0) push_if_near(a + ab * t);
                        }
                    }
                }
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                const double a0 = std::atan2(target.y - s.center.y, target.x - s.center.x);
                for (int k = 0; k < count; ++k) {
                    const double da = (radius / s.radius) * std::pow(0.5, 0.25 * k);
                    for (double sgn : {1.0, -1.0}) {
                        const double a = a0 + sgn * da;
                        push_if_near(s.center +
                                     Vec2{s.radius * std::cos(a), s.radius * std::sin(a)});
                    }
                }
                push_if_near(s.center + Vec2{s.radius * std::cos(a0), s.radius * std::sin(a0)});
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                const auto pos = [&](double th) { return superellipse_boundary_point(s, th); };
                const double th0 =
                    refine_boundary_param(*s.dense, pos, target, 2 * std::numbers::pi);
                // parameter speed varies wildly near the axes; step in theta
                // geometrically and keep whatever lands inside the radius
                for (int k = 0; k < 4 * count; ++k) {
                    const double dth = 2 * std::numbers::pi * std::pow(0.5, 0.12 * k + 2);
                    push_if_near(pos(th0 + dth));
                    push_if_near(pos(th0 - dth));
                }
                push_if_near(pos(th0));
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                const auto pos = [&](double t) { return s.curve->position(t); };
                const double t0 =
                    refine_boundary_param(s.curve->dense_boundary(), pos, target, 1.0);
                const double speed = std::max(1e-9, s.curve->velocity(t0).norm());
                for (int k = 0; k < 4 * count; ++k) {
                    const double dt = (radius / speed) * std::pow(0.5, 0.12 * k) * 2.0;
                    push_if_near(pos(t0 + dt));
                    push_if_near(pos(t0 - dt));
                }
                push_if_near(pos(t0));
            } else if constexpr (std::is_same_v<T, StripShape>) {
                const double T_n = s.normal.period();
                const Vec2 npq{static_cast<double>(s.normal.p), static_cast<double>(s.normal.q)};
                const Vec2 axis = s.normal.perp_unit();
                for (double edge : {s.lo, s.hi}) {
                    const Vec2 base = npq * (edge / T_n);
                    const double t0 = (target - base).dot(axis);
                    push_if_near(base + axis * t0);
                    for (int k = 0; k < count; ++k) {
                        const double d = radius * std::pow(0.5, 0.25 * k);
                        push_if_near(base + axis * (t0 + d));
                        push_if_near(base + axis * (t0 - d));
                    }
                }
            } else {  // UnionShape
                for (const auto& part : s.parts) {
                    auto sub = part->boundary_points_near(target, radius, count);
                    out.insert(out.end(), sub.begin(), sub.end());
                }
            }
        },
        v);
    return out;
}

namespace {

Box shape_box(const DampingShape& shape) {
    return std::visit(
        [&](const auto& s) -> Box {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                return box_of(s.vertices());
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                return {s.center - Vec2{s.radius, s.radius}, s.center + Vec2{s.radius, s.radius}};
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                return {s.center - Vec2{s.a, s.b}, s.center + Vec2{s.a, s.b}};
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                return box_of(s.curve->dense_boundary(), 1e-3);
            } else {
                return {{0.0, 0.0}, {1.0, 1.0}};
            }
        },
        shape.v);
}

}  // namespace

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

DampingShape make_polygon(std::vector<Vec2> edges, Vec2 anchor) {
    if (edges.size() < 3) throw std::domain_error("polygon: need at least 3 edges");
    Vec2 sum{0.0, 0.0};
    for (const Vec2& e : edges) {
        if (e.norm2() == 0.0) throw std::domain_error("polygon: degenerate zero edge");
        sum += e;
    }
    if (sum.norm() > 1e-9) throw std::domain_error("polygon: edges must sum to zero");
    // Snap the tiny closure residual so vertices() closes exactly.
    edges.back() -= sum;

    PolygonShape poly{std::move(edges), anchor, std::nullopt, nullptr};
    std::vector<std::array<std::int64_t, 4>> rats;
    bool all_rational = true;
    for (const Vec2& e : poly.edges) {
        const auto rx = rationalize(e.x);
        const auto ry = rationalize(e.y);
        if (!rx || !ry) {
            all_rational = false;
            break;
        }
        rats.push_back({rx->first, rx->second, ry->first, ry->second});
    }
    if (all_rational) poly.rational_edges = std::move(rats);
    poly.cached_vertices = std::make_shared<const std::vector<Vec2>>(poly.vertices());
    return DampingShape{std::move(poly)};
}

DampingShape make_polygon_from_vertices(const std::vector<Vec2>& vertices) {
    if (vertices.size() < 3) throw std::domain_error("polygon: need at least 3 vertices");
    std::vector<Vec2> edges;
    edges.reserve(vertices.size());
    for (std::size_t i = 0; i < vertices.size(); ++i)
        edges.push_back(vertices[(i + 1) % vertices.size()] - vertices[i]);
    return make_polygon(std::move(edges), vertices.front());
}

DampingShape make_disk(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw std::domain_error("disk: radius must be positive");
    DampingShape shape{DiskShape{center, radius}};
    return shape;
}

DampingShape make_superellipse(Vec2 center, double a, double b, double m, double n) {
    if (!(a > 0.0) || !(b > 0.0) || !(m > 0.0) || !(n > 0.0))
        throw std::domain_error("superellipse: parameters must be positive");
    SuperEllipseShape se{center, a, b, m, n, nullptr};
    auto dense = std::make_shared<std::vector<Vec2>>();
    constexpr int kDense = 4096;
    dense->reserve(kDense);
    for (int i = 0; i < kDense; ++i)
        dense->push_back(superellipse_boundary_point(se, 2 * std::numbers::pi * i / kDense));
    se.dense = std::move(dense);
    DampingShape shape{std::move(se)};
    return shape;
}

DampingShape make_curve(SmoothCurve curve) {
    DampingShape shape{CurveShape{std::make_shared<SmoothCurve>(std::move(curve))}};
    return shape;
}

DampingShape make_strip(RationalDirection normal, double lo, double hi) {
    const double circ = 1.0 / normal.period();
    if (!(hi > lo) || hi - lo > circ + 1e-12)
        throw std::domain_error("strip: need lo < hi <= lo + 1/T");
    return DampingShape{StripShape{normal, lo, std::min(hi, lo + circ)}};
}

DampingShape make_union(std::vector<DampingShape> parts) {
    if (parts.empty()) throw std::domain_error("union: empty");
    UnionShape u;
    u.parts.reserve(parts.size());
    for (auto& p : parts) u.parts.push_back(std::make_shared<DampingShape>(std::move(p)));
    return DampingShape{std::move(u)};
}

DampingShape rotated_shape(const DampingShape& shape, double angle, std::optional<Vec2> pivot) {
    return std::visit(
        [&](const auto& s) -> DampingShape {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                const auto vtx = s.vertices();
                Vec2 c{0.0, 0.0};
                for (const Vec2& p : vtx) c += p;
                c = pivot.value_or(c / static_cast<double>(vtx.size()));
                std::vector<Vec2> rot;
                rot.reserve(vtx.size());
                for (const Vec2& p : vtx) rot.push_back(c + rotate(p - c, angle));
                return make_polygon_from_vertices(rot);
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                const Vec2 c = pivot.value_or(s.center);
                return make_disk(c + rotate(s.center - c, angle), s.radius);
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                const bool even_mn = s.m == s.n && s.m >= 2.0 &&
                                     s.m == std::floor(s.m) &&
                                     static_cast<int>(s.m) % 2 == 0;
                if (!even_mn)
                    throw std::domain_error(
                        "rotated_shape: superellipse rotation needs equal even exponents");
                auto curve = SmoothCurve::superellipse(s.center, s.a, s.b,
                                                       static_cast<int>(s.m))
                                 .rotated(angle, pivot.value_or(s.center));
                return make_curve(std::move(curve));
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                return make_curve(s.curve->rotated(angle, pivot));
            } else if constexpr (std::is_same_v<T, UnionShape>) {
                if (!pivot) throw std::domain_error("rotated_shape: union needs explicit pivot");
                std::vector<DampingShape> parts;
                for (const auto& p : s.parts) parts.push_back(rotated_shape(*p, angle, pivot));
                return make_union(std::move(parts));
            } else {
                throw std::domain_error("rotated_shape: strips cannot be rotated");
            }
        },
        shape.v);
}

DampingShape translated_shape(const DampingShape& shape, Vec2 delta) {
    return std::visit(
        [&](const auto& s) -> DampingShape {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                PolygonShape out = s;
                out.anchor += delta;
                out.cached_vertices = nullptr;  // invalidate before rebuilding
                out.cached_vertices = std::make_shared<const std::vector<Vec2>>(out.vertices());
                return DampingShape{std::move(out)};
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                return make_disk(s.center + delta, s.radius);
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                return make_superellipse(s.center + delta, s.a, s.b, s.m, s.n);
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                const SmoothCurve& c = *s.curve;
                auto g = [c, delta](double t) { return c.position(t) + delta; };
                auto dg = [c](double t) { return c.velocity(t); };
                auto ddg = [c](double t) { return c.acceleration(t); };
                return make_curve(SmoothCurve(g, dg, ddg, c.kind() + "/translated"));
            } else if constexpr (std::is_same_v<T, StripShape>) {
                const double T_n = s.normal.period();
                const double shift =
                    delta.dot({static_cast<double>(s.normal.p), static_cast<double>(s.normal.q)}) /
                    T_n;
                const double circ = 1.0 / T_n;
                double lo = s.lo + shift;
                lo -= circ * std::floor(lo / circ);
                return make_strip(s.normal, lo, lo + (s.hi - s.lo));
            } else {
                std::vector<DampingShape> parts;
                for (const auto& p : s.parts) parts.push_back(translated_shape(*p, delta));
                return make_union(std::move(parts));
            }
        },
        shape.v);
}

}  // namespace glance
