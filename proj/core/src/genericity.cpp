#include "glance/genericity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glance {

using std::numbers::pi;

CandidateDirectionSet candidate_set_for(const DampingShape& shape) {
    const double r = shape.inradius().value;
    if (!(r > 0.0)) throw std::domain_error("candidate_set_for: empty interior");
    const int k = static_cast<int>(std::floor(1.0 / r)) + 1;
    return {k, enumerate_candidate_directions(1.0 / k)};
}

namespace {

const PolygonShape& require_polygon(const DampingShape& shape) {
    const auto* poly = std::get_if<PolygonShape>(&shape.v);
    if (!poly) throw std::domain_error("expected a polygon shape");
    for (const Vec2& e : poly->edges)
        if (e.norm2() == 0.0) throw std::domain_error("degenerate polygon edge");
    if (!polygon_is_simple(*poly)) throw std::domain_error("polygon self-intersects");
    if (!shape.properly_projected())
        throw std::domain_error("polygon is not properly projected");
    return *poly;
}

bool edge_matches_direction(const PolygonShape& poly, std::size_t edge_index,
                            const RationalDirection& v, bool& exact) {
    const Vec2 e = poly.edges[edge_index];
    if (poly.rational_edges) {
        exact = true;
        // edge = (a/b, c/d); parallel to (p,q) iff a*d*q == c*b*p.
        const auto& [a, b, cc, d] = (*poly.rational_edges)[edge_index];
        const auto lhs = static_cast<__int128>(a) * d * v.q;
        const auto rhs = static_cast<__int128>(cc) * b * v.p;
        return lhs == rhs;
    }
    exact = false;
    const double cross = e.x * static_cast<double>(v.q) - e.y * static_cast<double>(v.p);
    return std::fabs(cross) <= 1e-12 * e.norm() * v.period();
}

const SmoothCurve& require_curve(const DampingShape& shape) {
    const auto* cs = std::get_if<CurveShape>(&shape.v);
    if (!cs) throw std::domain_error("expected a smooth-curve shape");
    return *cs->curve;
}

/// Union length of angle intervals on a circle of circumference `circ`.
double union_measure(const std::vector<AngleInterval>& intervals, double circ) {
    if (intervals.empty()) return 0.0;
    std::vector<std::pair<double, double>> segs;
    for (const AngleInterval& it : intervals) {
        double len = it.hi - it.lo;
        if (len <= 0.0) continue;
        len = std::min(len, circ);
        const double lo = it.lo - circ * std::floor(it.lo / circ);
        if (lo + len <= circ) {
            segs.emplace_back(lo, lo + len);
        } else {
            segs.emplace_back(lo, circ);
            segs.emplace_back(0.0, lo + len - circ);
        }
    }
    std::sort(segs.begin(), segs.end());
    double total = 0.0, cur_lo = 0.0, cur_hi = -1.0;
    for (const auto& [lo, hi] : segs) {
        if (lo > cur_hi) {
            if (cur_hi > cur_lo) total += cur_hi - cur_lo;
            cur_lo = lo;
            cur_hi = hi;
        } else {
            cur_hi = std::max(cur_hi, hi);
        }
    }
    if (cur_hi > cur_lo) total += cur_hi - cur_lo;
    return total;
}

}  // namespace

PolygonMembership polygon_in_Q(const DampingShape& shape) {
    const PolygonShape& poly = require_polygon(shape);
    const CandidateDirectionSet cand = candidate_set_for(shape);
    PolygonMembership out;
    out.in_class = true;
    out.exact_arithmetic = poly.rational_edges.has_value();
    for (std::size_t i = 0; i < poly.edges.size(); ++i) {
        for (const RationalDirection& v : cand.directions) {
            bool exact = false;
            if (edge_matches_direction(poly, i, v, exact)) {
                out.in_class = false;
                out.witness = {static_cast<int>(i), v};
                return out;
            }
        }
    }
    return out;
}

std::vector<double> polygon_exceptional_rotations(const DampingShape& shape) {
    const PolygonShape& poly = require_polygon(shape);
    const CandidateDirectionSet cand = candidate_set_for(shape);

    std::vector<double> angles;
    for (const Vec2& e : poly.edges) {
        const double edge_angle = std::atan2(e.y, e.x);
        for (const RationalDirection& v : cand.directions) {
            double theta = v.angle() - edge_angle;
            theta -= pi * std::floor(theta / pi);  // unoriented alignment: mod pi
            if (theta >= pi) theta = 0.0;
            angles.push_back(theta);
        }
    }
    std::sort(angles.begin(), angles.end());
    std::vector<double> dedup;
    for (double a : angles) {
        if (dedup.empty() || a - dedup.back() > 1e-12) dedup.push_back(a);
    }
    // keep only rotations that stay properly projected
    std::vector<double> admissible;
    const Vec2 pivot = shape.reference_interior_point();
    for (double a : dedup) {
        const DampingShape rotated = rotated_shape(shape, a, pivot);
        if (rotated.properly_projected()) admissible.push_back(a);
    }
    return admissible;
}

double curve_f_gamma(const SmoothCurve& curve, double t,
                     const std::vector<RationalDirection>& candidates) {
    const Vec2 vel = curve.velocity(t);
    const double speed = vel.norm();
    if (!(speed > 0.0)) throw std::domain_error("curve_f_gamma: vanishing speed");
    const Vec2 u = vel / speed;
    double product = 1.0;
    for (const RationalDirection& v : candidates) {
        const Vec2 w = v.unit();
        product *= (u + w).norm() * (u - w).norm();
    }
    return curve.curvature(t) + product;
}

CurveMembership curve_in_Y(const DampingShape& shape) {
    const SmoothCurve& curve = require_curve(shape);
    if (!shape.properly_projected())
        throw std::domain_error("curve_in_Y: curve is not properly projected");
    const CandidateDirectionSet cand = candidate_set_for(shape);

    const int n = 8192;
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        f[static_cast<std::size_t>(i)] = curve_f_gamma(curve, static_cast<double>(i) / n,
                                                       cand.directions);

    // Sampled Lipschitz bound for the certificate.
    double lip = 0.0;
    for (int i = 0; i < n; ++i)
        lip = std::max(lip, std::fabs(f[static_cast<std::size_t>((i + 1) % n)] -
                                      f[static_cast<std::size_t>(i)]) *
                                n);
    lip *= 2.0;  // safety on the sampled bound

    CurveMembership out;
    auto min_it = std::min_element(f.begin(), f.end());
    out.min_value = *min_it;
    out.argmin = static_cast<double>(std::distance(f.begin(), min_it)) / n;

    constexpr double kZeroTol = 1e-7;
    if (out.min_value <= kZeroTol) {
        out.in_class = false;  // certified: a sampled value (numerically) vanishes
        return out;
    }
    const double cell_slack = lip * 0.5 / n;
    if (out.min_value - cell_slack > 0.0) {
        out.in_class = true;  // certified positive everywhere
        return out;
    }
    out.indeterminate = true;  // needs refinement to certify either way
    out.in_class = false;
    return out;
}

RotationDiagnostics curve_exceptional_rotation_set(const DampingShape& shape,
                                                   double angular_resolution) {
    const SmoothCurve& curve = require_curve(shape);
    const CandidateDirectionSet cand = candidate_set_for(shape);

    RotationDiagnostics diag;
    diag.resolution = angular_resolution;

    // Outer cover of the tangent directions where curvature vanishes. The
    // curvature tolerance shrinks with the resolution so that isolated
    // curvature zeros yield covers whose measure vanishes under refinement.
    const int n = std::max(4096, static_cast<int>(std::ceil(2 * pi / angular_resolution)) * 4);
    const double kKappaTol = std::max(1e-12, angular_resolution);
    std::vector<char> flat(static_cast<std::size_t>(n));
    std::vector<double> tangent_angle(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / n;
        flat[static_cast<std::size_t>(i)] = curve.curvature(t) <= kKappaTol;
        const Vec2 u = curve.velocity(t);
        tangent_angle[static_cast<std::size_t>(i)] = std::atan2(u.y, u.x);
    }
    for (int i = 0; i < n; ++i) {
        if (!flat[static_cast<std::size_t>(i)]) continue;
        const double a = tangent_angle[static_cast<std::size_t>(i)];
        diag.critical_directions.push_back(
            {a - angular_resolution, a + angular_resolution});
    }

    // K = union over candidate angles theta_j (both orientations) of
    // theta_j - E, as angle intervals mod 2*pi.
    for (const RationalDirection& v : cand.directions) {
        for (double sign : {0.0, pi}) {
            const double theta_j = v.angle() + sign;
            for (const AngleInterval& e : diag.critical_directions)
                diag.exceptional_cover.push_back({theta_j - e.hi, theta_j - e.lo});
        }
    }
    diag.measure_estimate = union_measure(diag.exceptional_cover, 2 * pi);
    return diag;
}

nlohmann::json genericity_to_json(const PolygonMembership& m) {
    nlohmann::json j;
    j["schema"] = "glance.genericity.polygon/1";
    j["in_class"] = m.in_class;
    j["exact_arithmetic"] = m.exact_arithmetic;
    if (m.witness) {
        j["witness"] = {{"edge_index", m.witness->first},
                        {"direction", {m.witness->second.p, m.witness->second.q}}};
    }
    return j;
}

nlohmann::json genericity_to_json(const CurveMembership& m) {
    nlohmann::json j;
    j["schema"] = "glance.genericity.curve/1";
    j["in_class"] = m.in_class;
    j["indeterminate"] = m.indeterminate;
    j["min_f_gamma"] = m.min_value;
    j["argmin"] = m.argmin;
    return j;
}

nlohmann::json genericity_to_json(const RotationDiagnostics& d) {
    nlohmann::json j;
    j["schema"] = "glance.genericity.rotations/1";
    j["resolution"] = d.resolution;
    j["measure_estimate"] = d.measure_estimate;
    auto arr = nlohmann::json::array();
    for (const auto& it : d.exceptional_cover) arr.push_back({it.lo, it.hi});
    j["exceptional_cover"] = std::move(arr);
    return j;
}

}  // namespace glance
