#include "glance/glancing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "glance/numerics.hpp"
#include "glance/parallel.hpp"

namespace glance {
namespace {

/// Max of the signed distance over a longitudinal window of the geodesic,
/// with Lipschitz-aware refinement of the candidate cells.
double max_signed_on_window(const DampingShape& shape, const DirectionFrame& frame, double s,
                            double t_lo, double t_hi, int base) {
    const double len = t_hi - t_lo;
    const double h = len / base;
    std::vector<double> g(static_cast<std::size_t>(base) + 1);
    double gmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= base; ++i) {
        g[static_cast<std::size_t>(i)] = shape.signed_distance(frame.point(s, t_lo + h * i));
        gmax = std::max(gmax, g[static_cast<std::size_t>(i)]);
    }
    // The signed distance is 1-Lipschitz along the line, so the true max
    // lives in a cell whose sample is within 2h of the grid max.
    double best = gmax;
    for (int i = 0; i <= base; ++i) {
        if (g[static_cast<std::size_t>(i)] < gmax - 2.0 * h) continue;
        const double a = std::max(t_lo, t_lo + h * (i - 1));
        const double b = std::min(t_hi, t_lo + h * (i + 1));
        const auto obj = [&](double t) { return -shape.signed_distance(frame.point(s, t)); };
        best = std::max(best, -golden_minimize(obj, a, b, 1e-12 * len).second);
    }
    return best;
}

int default_base_samples(const DirectionFrame& frame) {
    return std::max(768, static_cast<int>(512.0 * std::ceil(frame.t_circumference())));
}

bool enters(const DampingShape& shape, const DirectionFrame& frame, double s,
            const GlancingOptions& opt) {
    return line_reach(shape, frame, s, default_base_samples(frame)) > opt.enter_tolerance;
}

/// Restricted entering test used for point-level sidedness.
bool enters_local(const DampingShape& shape, const DirectionFrame& frame, double s, double t0,
                  double halfwidth, const GlancingOptions& opt) {
    return max_signed_on_window(shape, frame, s, t0 - halfwidth, t0 + halfwidth, 96) >
           opt.enter_tolerance;
}

double wrap_to(double x, double circumference) {
    double r = x - circumference * std::floor(x / circumference);
    if (r >= circumference) r = 0.0;
    return r;
}

/// Refine a candidate tangency offset. Bisects the reach when it changes
/// sign across the bracket, otherwise minimizes |reach|.
std::optional<double> refine_candidate(const DampingShape& shape, const DirectionFrame& frame,
                                       double s0, double bracket, const GlancingOptions& opt) {
    const int base = default_base_samples(frame);
    const auto reach = [&](double s) { return line_reach(shape, frame, s, base); };
    const double c = frame.s_circumference();
    double lo = s0 - bracket, hi = s0 + bracket;
    const double rlo = reach(lo), rhi = reach(hi), r0 = reach(s0);
    double s_star = s0, r_star = r0;
    const auto better = [&](double s, double r) {
        if (std::fabs(r) < std::fabs(r_star)) {
            s_star = s;
            r_star = r;
        }
    };
    if ((rlo > 0) != (r0 > 0))
        better(bisect(reach, lo, s0, opt.s_refine_tolerance * c), 0.0);
    else if ((r0 > 0) != (rhi > 0))
        better(bisect(reach, s0, hi, opt.s_refine_tolerance * c), 0.0);
    else {
        const auto [sm, rm] =
            golden_minimize([&](double s) { return std::fabs(reach(s)); }, lo, hi,
                            opt.s_refine_tolerance * c);
        better(sm, rm);
    }
    const double final_reach = reach(s_star);
    if (std::fabs(final_reach) > opt.touch_tolerance) return std::nullopt;
    return wrap_to(s_star, c);
}

/// Tangent-parallel boundary parameters for curved shapes: roots of
/// cross(tangent, v).
template <typename PosFn, typename TanFn>
std::vector<double> tangent_alignment_params(const PosFn&, const TanFn& tan, Vec2 v_unit,
                                             double period, int grid) {
    std::vector<double> roots;
    double prev = tan(0.0).cross(v_unit);
    for (int i = 1; i <= grid; ++i) {
        const double t = period * static_cast<double>(i) / grid;
        const double cur = tan(t).cross(v_unit);
        if (prev == 0.0) roots.push_back(period * static_cast<double>(i - 1) / grid);
        else if ((prev > 0) != (cur > 0)) {
            const double a = period * static_cast<double>(i - 1) / grid;
            roots.push_back(bisect([&](double u) { return tan(u).cross(v_unit); }, a, t,
                                   1e-13 * period));
        }
        prev = cur;
    }
    return roots;
}

std::vector<double> candidate_offsets(const DampingShape& shape, const DirectionFrame& frame,
                                      const GlancingOptions& opt, bool& need_scan) {
    need_scan = false;
    const RationalDirection v = frame.direction;
    const Vec2 perp = v.perp_unit();
    const double c = frame.s_circumference();

    if (const auto* st = std::get_if<StripShape>(&shape.v)) {
        const RationalDirection axis(-st->normal.q, st->normal.p);
        if (!(axis == v)) return {};
        const double T_n = st->normal.period();
        const Vec2 npq{static_cast<double>(st->normal.p), static_cast<double>(st->normal.q)};
        std::vector<double> out;
        const bool full = std::fabs((st->hi - st->lo) - 1.0 / T_n) < 1e-12;
        out.push_back(frame.s_of(TorusPoint{npq * (st->lo / T_n)}));
        if (!full) out.push_back(frame.s_of(TorusPoint{npq * (st->hi / T_n)}));
        return out;
    }
    if (shape.is_union()) {
        need_scan = true;
        return {};
    }

    const double hi_sup = shape.support(perp);
    const double lo_sup = -shape.support(-perp);
    const double len = hi_sup - lo_sup;
    std::vector<double> out;
    if (len > c + 1e-9) {
        need_scan = true;  // shadow wraps: only a scan can find residual tangencies
        return {};
    }
    if (std::fabs(len - c) <= 1e-9) {
        out.push_back(wrap_to(hi_sup, c));
    } else {
        out.push_back(wrap_to(lo_sup, c));
        out.push_back(wrap_to(hi_sup, c));
    }

    // Boundary pieces parallel to v strictly inside the shadow can carry
    // extra glancing lines on non-convex shapes.
    const Vec2 v_unit = v.unit();
    if (const auto* poly = std::get_if<PolygonShape>(&shape.v)) {
        const auto vtx = poly->vertices();
        for (std::size_t i = 0; i < vtx.size(); ++i) {
            const Vec2 e = vtx[(i + 1) % vtx.size()] - vtx[i];
            if (std::fabs(e.cross(v_unit)) <= 1e-12 * e.norm())
                out.push_back(wrap_to(vtx[i].dot(perp), c));
        }
    } else if (const auto* se = std::get_if<SuperEllipseShape>(&shape.v)) {
        const auto pos = [&](double th) { return superellipse_boundary_point(*se, th); };
        const auto tanfd = [&](double th) {
            const double h = 1e-6;
            return (pos(th + h) - pos(th - h)) / (2 * h);
        };
        for (double th : tangent_alignment_params(pos, tanfd, v_unit, 2 * std::numbers::pi, 2048))
            out.push_back(wrap_to(pos(th).dot(perp), c));
    } else if (const auto* cs = std::get_if<CurveShape>(&shape.v)) {
        const auto pos = [&](double t) { return cs->curve->position(t); };
        const auto tang = [&](double t) { return cs->curve->velocity(t); };
        for (double t : tangent_alignment_params(pos, tang, v_unit, 1.0, 2048))
            out.push_back(wrap_to(pos(t).dot(perp), c));
    }
    return out;
}

std::vector<double> scan_offsets(const DampingShape& shape, const DirectionFrame& frame,
                                 const GlancingOptions& opt) {
    const double c = frame.s_circumference();
    const int n = std::max(64, static_cast<int>(std::ceil(1.0 / opt.s_resolution_factor)));
    const int base = default_base_samples(frame);
    std::vector<double> reach(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        reach[static_cast<std::size_t>(i)] =
            line_reach(shape, frame, c * static_cast<double>(i) / n, base);

    std::vector<double> out;
    const auto entered = [&](int i) {
        return reach[static_cast<std::size_t>((i % n + n) % n)] > opt.enter_tolerance;
    };
    bool any_enter = false, any_miss = false;
    for (int i = 0; i < n; ++i) {
        entered(i) ? any_enter = true : any_miss = true;
    }
    if (!any_enter) return out;  // nothing damped in this direction? nothing to report
    if (any_miss) {
        // Transition edges of the missing components.
        for (int i = 0; i < n; ++i) {
            if (entered(i) == entered(i + 1)) continue;
            const double a = c * static_cast<double>(i) / n;
            const double b = c * static_cast<double>(i + 1) / n;
            out.push_back(wrap_to(
                bisect([&](double s) { return line_reach(shape, frame, s, base) -
                                              opt.enter_tolerance; },
                       a, b, opt.s_refine_tolerance * c),
                c));
        }
        // Touching lines strictly inside missing components (boundary
        // segments aligned with v).
        for (int i = 0; i < n; ++i) {
            if (entered(i) || entered(i - 1) || entered(i + 1)) continue;
            if (std::fabs(reach[static_cast<std::size_t>(i)]) > 4.0 * c / n) continue;
            const double a = c * static_cast<double>(i - 1) / n;
            const double b = c * static_cast<double>(i + 1) / n;
            const auto [sm, rm] = golden_minimize(
                [&](double s) { return std::fabs(line_reach(shape, frame, s, base)); }, a, b,
                opt.s_refine_tolerance * c);
            if (rm <= opt.touch_tolerance) out.push_back(wrap_to(sm, c));
        }
    } else {
        // All lines enter except possibly isolated tangencies: look for dips
        // of the reach toward zero.
        for (int i = 0; i < n; ++i) {
            const double r0 = reach[static_cast<std::size_t>(i)];
            const double rl = reach[static_cast<std::size_t>((i + n - 1) % n)];
            const double rr = reach[static_cast<std::size_t>((i + 1) % n)];
            if (r0 > rl || r0 > rr) continue;
            if (r0 > 4.0 * c / n) continue;
            const double a = c * static_cast<double>(i - 1) / n;
            const double b = c * static_cast<double>(i + 1) / n;
            const auto [sm, rm] = golden_minimize(
                [&](double s) { return std::fabs(line_reach(shape, frame, s, base)); }, a, b,
                opt.s_refine_tolerance * c);
            if (rm <= opt.touch_tolerance) out.push_back(wrap_to(sm, c));
        }
    }
    return out;
}

}  // namespace

double line_reach(const DampingShape& shape, const DirectionFrame& frame, double s,
                  int base_samples) {
    return max_signed_on_window(shape, frame, s, 0.0, frame.t_circumference(), base_samples);
}

Sidedness classify_line(const DampingShape& shape, const DirectionFrame& frame, double s_offset,
                        const GlancingOptions& opt) {
    const double c = frame.s_circumference();
    bool plus_misses = true, minus_misses = true;
    for (int j = 3; j <= 6; ++j) {
        const double delta = c * std::pow(10.0, -j);
        if (enters(shape, frame, s_offset + delta, opt)) plus_misses = false;
        if (enters(shape, frame, s_offset - delta, opt)) minus_misses = false;
        if (!plus_misses && !minus_misses) break;
    }
    return (plus_misses || minus_misses) ? Sidedness::one_sided : Sidedness::two_sided;
}

std::vector<GlancingLine> find_glancing_lines(const DampingShape& shape, RationalDirection v,
                                              const GlancingOptions& opt) {
    const DirectionFrame frame(v);
    const double c = frame.s_circumference();

    bool need_scan = false;
    std::vector<double> candidates = candidate_offsets(shape, frame, opt, need_scan);
    if (need_scan) candidates = scan_offsets(shape, frame, opt);

    std::vector<double> accepted;
    const double bracket = std::max(opt.s_resolution_factor * c, 64.0 * opt.s_refine_tolerance * c);
    for (double s0 : candidates) {
        const auto refined = refine_candidate(shape, frame, s0, bracket, opt);
        if (!refined) continue;
        bool dup = false;
        for (double s : accepted)
            if (circle_distance(s, *refined, c) < 1e-6 * c) dup = true;
        if (!dup) accepted.push_back(*refined);
    }
    std::sort(accepted.begin(), accepted.end());

    std::vector<GlancingLine> lines;
    for (double s : accepted) {
        GlancingLine line;
        line.direction = v;
        line.s_offset = s;
        line.sided = classify_line(shape, frame, s, opt);
        lines.push_back(std::move(line));
    }
    return lines;
}

std::vector<GlancingPoint> find_glancing_points(const DampingShape& shape,
                                                const GlancingLine& line,
                                                const GlancingOptions& opt) {
    const DirectionFrame frame(line.direction);
    const double T = frame.t_circumference();
    const int n = std::max(2048, static_cast<int>(1024.0 * std::ceil(T)));
    const double h = T / n;
    const double s = line.s_offset;

    std::vector<double> b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        b[static_cast<std::size_t>(i)] = shape.boundary_distance(frame.point(s, h * i));

    // Candidate touching parameters: refine every cell that could dip below
    // the touch tolerance (boundary distance is 1-Lipschitz in t).
    std::vector<double> touches;
    for (int i = 0; i < n; ++i) {
        if (b[static_cast<std::size_t>(i)] > opt.touch_tolerance + 2.0 * h) continue;
        const auto obj = [&](double t) { return shape.boundary_distance(frame.point(s, t)); };
        const auto [tm, bm] = golden_minimize(obj, h * (i - 1), h * (i + 1), 1e-12 * T);
        if (bm <= opt.touch_tolerance) touches.push_back(wrap_to(tm, T));
    }
    if (touches.empty()) return {};
    std::sort(touches.begin(), touches.end());

    // Cluster, allowing wraparound; a cluster wider than a few cells is a
    // boundary segment lying on the line.
    struct Cluster {
        double lo, hi;
    };
    std::vector<Cluster> clusters;
    const double gap = 2.5 * h;
    for (double t : touches) {
        if (!clusters.empty() && t - clusters.back().hi <= gap)
            clusters.back().hi = t;
        else
            clusters.push_back({t, t});
    }
    if (clusters.size() >= 2 &&
        (touches.front() + T) - clusters.back().hi <= gap) {  // merge across wrap
        clusters.front().lo = clusters.back().lo - T;
        clusters.pop_back();
    }

    std::vector<GlancingPoint> points;
    const auto add_point = [&](double t, bool segment_rep) {
        GlancingPoint pt;
        pt.location = frame.point(s, wrap_to(t, T));
        pt.direction = line.direction;
        pt.t_offset = wrap_to(t, T);
        pt.on_boundary_segment = segment_rep;
        points.push_back(std::move(pt));
    };
    const auto bd_at = [&](double t) { return shape.boundary_distance(frame.point(s, t)); };
    for (const Cluster& cl : clusters) {
        const double width = cl.hi - cl.lo;
        if (width > 10.0 * h) {
            // Wide near-touch clusters are either genuine boundary segments
            // on the line or single tangencies of high order. A segment has
            // machine-zero distance across its width; a finite-order
            // tangency climbs back above it away from the minimum.
            const auto [t_min, b_min] =
                golden_minimize(bd_at, cl.lo, cl.hi, 1e-12 * T);
            const double probe_tol = std::max(10.0 * b_min, 1e-11);
            const bool flat_left = bd_at(t_min - 0.25 * width) <= probe_tol;
            const bool flat_right = bd_at(t_min + 0.25 * width) <= probe_tol;
            if (flat_left || flat_right) {
                if (width >= 0.95 * T) {
                    add_point(0.5 * (cl.lo + cl.hi), true);  // the whole line touches
                } else {
                    add_point(cl.lo, false);
                    add_point(cl.hi, false);
                    add_point(0.5 * (cl.lo + cl.hi), true);
                }
            } else {
                add_point(t_min, false);
            }
        } else {
            add_point(0.5 * (cl.lo + cl.hi), false);
        }
    }

    // Point-level sidedness, stabilized across two window sizes.
    const double c = frame.s_circumference();
    for (GlancingPoint& pt : points) {
        int vote = 0;  // +1 one-sided, -1 two-sided per window
        bool agree = true;
        Sidedness first = Sidedness::one_sided;
        for (int w = 0; w < 2; ++w) {
            const double rho = T * (w == 0 ? 0.02 : 0.01);
            bool plus_misses = true, minus_misses = true;
            for (int j = 3; j <= 6; ++j) {
                const double delta = c * std::pow(10.0, -j);
                if (enters_local(shape, frame, s + delta, pt.t_offset, rho, opt))
                    plus_misses = false;
                if (enters_local(shape, frame, s - delta, pt.t_offset, rho, opt))
                    minus_misses = false;
            }
            const Sidedness sided =
                (plus_misses || minus_misses) ? Sidedness::one_sided : Sidedness::two_sided;
            if (w == 0)
                first = sided;
            else
                agree = (sided == first);
            vote += (sided == Sidedness::one_sided) ? 1 : -1;
        }
        pt.sided = vote > 0 ? Sidedness::one_sided : Sidedness::two_sided;
        pt.sided_indeterminate = !agree;
    }
    return points;
}


// ---------------------------------------------------------------------------
// Order estimation
// ---------------------------------------------------------------------------

namespace {

/// Planar lift of a torus point nearest to the shape's reference lift.
Vec2 planar_lift(const DampingShape& shape, TorusPoint z) {
    Vec2 best = z.vec();
    double best_d = std::numeric_limits<double>::infinity();
    for (int ix = -1; ix <= 2; ++ix)
        for (int iy = -1; iy <= 2; ++iy) {
            const Vec2 p = z.vec() + Vec2{static_cast<double>(ix), static_cast<double>(iy)};
            // distance to the dense boundary of the reference lift
            double d = std::numeric_limits<double>::infinity();
            for (const Vec2& q : shape.boundary_samples(128)) d = std::min(d, (p - q).norm());
            if (d < best_d) {
                best_d = d;
                best = p;
            }
        }
    return best;
}

struct SideFit {
    std::optional<double> slope;
    int buckets{0};
    bool parallel{false};
};

SideFit dyadic_side_fit(const std::vector<std::pair<double, double>>& xy, double radius) {
    // xy rows are (|x| metric, |y|) for one y-sign side. Slopes come from
    // least squares over sliding 4-octave windows of |y|; a least-squares
    // fit stays unbiased when several boundary branches with different
    // prefactors share the window, where a per-bucket median would not.
    SideFit out;
    std::vector<double> slopes;
    for (int k = 0;; ++k) {
        const double hi = radius * std::pow(0.5, k);
        const double lo = hi * std::pow(0.5, 4);
        if (hi < 1e-12) break;
        std::vector<double> lx, ly;
        double max_x = 0.0;
        for (const auto& [x, y] : xy)
            if (y > lo && y <= hi) {
                max_x = std::max(max_x, x);
                if (x > 1e-13) {
                    lx.push_back(std::log(y));
                    ly.push_back(std::log(x));
                }
            }
        if (lx.size() < 6) {
            if (k == 0 || k > 28) break;
            continue;
        }
        if (out.buckets == 0 && max_x < 1e-12) {
            out.parallel = true;  // data hugs the line at the widest scales
            return out;
        }
        ++out.buckets;
        slopes.push_back(fit_line(lx, ly).slope);
        if (slopes.size() >= 3) {
            const double a = slopes[slopes.size() - 3];
            const double b = slopes[slopes.size() - 2];
            const double c = slopes[slopes.size() - 1];
            const double lo_s = std::min({a, b, c});
            const double hi_s = std::max({a, b, c});
            if (hi_s - lo_s <= 0.05) out.slope = (a + b + c) / 3.0;  // deepest stable run wins
        }
    }
    return out;
}

/// Fits the sandwich constants for a known order and verifies the
/// containments on sampled data.
void fit_constants(const DampingShape& shape, Vec2 lift, GlancingPoint& pt,
                   OrderEstimate& est, double eta, double radius) {
    auto& chart = pt.chart;
    const auto samples = shape.boundary_points_near(lift, radius, 48);
    std::vector<double> ratios;
    for (const Vec2& p : samples) {
        const Vec2 d = p - lift;
        const double x = std::fabs(d.dot(chart.x_axis));
        const double y = std::fabs(d.dot(chart.y_axis));
        if (y < radius * std::pow(0.5, 12) || y > radius) continue;
        if (x < 1e-13) continue;
        ratios.push_back(x / std::pow(y, eta));
    }
    if (ratios.size() < 4) return;
    const double rmax = *std::max_element(ratios.begin(), ratios.end());
    const double rmin = *std::min_element(ratios.begin(), ratios.end());
    chart.x_scale = 0.5 / rmax;
    est.c_in = std::sqrt(2.0);
    est.c_out = 2.0 * std::max(2.0 * rmax / rmin, 1.5 * est.c_in);

    // (i) boundary samples inside the outer wedge
    bool ok = true;
    for (double r : ratios)
        if (r * chart.x_scale < 1.0 / est.c_out) ok = false;

    // (ii) inner wedge probes must be damped on at least one admissible side
    const auto probe_side = [&](double sx, double sy) {
        for (int k = 1; k <= 6 && ok; ++k) {
            const double y = sy * radius * std::pow(0.5, k);
            for (double tau : {1.0 / est.c_in * 1.05, 1.0, est.c_in * 0.95}) {
                const double xm = sx * tau * std::pow(std::fabs(y), eta) / chart.x_scale;
                if (std::fabs(xm) > radius) continue;
                const Vec2 p = lift + chart.x_axis * xm + chart.y_axis * y;
                if (!shape.contains(TorusPoint{p})) return false;
            }
        }
        return true;
    };
    bool inner_ok;
    if (pt.sided == Sidedness::one_sided) {
        inner_ok = probe_side(1.0, 1.0) || probe_side(1.0, -1.0);
    } else {
        const bool half_plane = probe_side(1.0, 1.0) && probe_side(-1.0, 1.0);
        const bool half_plane_b = probe_side(1.0, -1.0) && probe_side(-1.0, -1.0);
        const bool quadrants = (probe_side(1.0, 1.0) && probe_side(-1.0, -1.0)) ||
                               (probe_side(1.0, -1.0) && probe_side(-1.0, 1.0));
        inner_ok = half_plane || half_plane_b || quadrants;
    }
    est.sandwich_verified = ok && inner_ok;
}

}  // namespace

ChartOrderFit dyadic_order_fit(const std::vector<Vec2>& chart_points, double radius) {
    std::vector<std::pair<double, double>> plus, minus;
    for (const Vec2& p : chart_points) {
        if (std::fabs(p.y) < 1e-15) continue;
        (p.y > 0 ? plus : minus).emplace_back(std::fabs(p.x), std::fabs(p.y));
    }
    const SideFit f_plus = dyadic_side_fit(plus, radius);
    const SideFit f_minus = dyadic_side_fit(minus, radius);
    ChartOrderFit out;
    out.boundary_parallel = (plus.empty() || f_plus.parallel) && (minus.empty() || f_minus.parallel) &&
                            (f_plus.parallel || f_minus.parallel);
    if (f_plus.slope) out.side_orders.push_back(*f_plus.slope);
    if (f_minus.slope) out.side_orders.push_back(*f_minus.slope);
    if (!out.side_orders.empty())
        out.order = *std::max_element(out.side_orders.begin(), out.side_orders.end());
    return out;
}

namespace {

const DampingShape& owning_part(const DampingShape& shape, TorusPoint z) {
    if (const auto* u = std::get_if<UnionShape>(&shape.v)) {
        const DampingShape* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& part : u->parts) {
            const double d = part->boundary_distance(z);
            if (d < best_d) {
                best_d = d;
                best = part.get();
            }
        }
        return owning_part(*best, z);
    }
    return shape;
}

}  // namespace

OrderEstimate estimate_order(const DampingField& field, GlancingPoint& pt, double feature_size,
                             const GlancingOptions& opt) {
    const DampingShape& whole = field.shape();
    const DampingShape& shape = owning_part(whole, pt.location);
    const DirectionFrame frame(pt.direction);
    const double c = frame.s_circumference();
    OrderEstimate est;
    est.method = "none";

    // Chart axes: y along the line, +x toward the entering side.
    pt.chart.origin = pt.location;
    pt.chart.y_axis = pt.direction.unit();
    Vec2 x_axis = pt.direction.perp_unit();
    {
        const double s = frame.s_of(pt.location);
        const double probe = 1e-4 * c;
        const bool plus = enters_local(whole, frame, s + probe, pt.t_offset, 0.02, opt);
        const bool minus = enters_local(whole, frame, s - probe, pt.t_offset, 0.02, opt);
        if (!plus && minus) x_axis = -x_axis;
    }
    pt.chart.x_axis = x_axis;
    const double radius =
        opt.chart_radius_override.value_or(std::max(1e-4, opt.chart_radius_factor * feature_size));
    pt.chart.radius = radius;
    pt.damping_exponent = field.exponent_at(pt.location);

    if (pt.on_boundary_segment || shape.is_strip()) {
        est.method = "boundary-parallel";
        pt.order = est;
        return est;
    }

    const Vec2 lift = planar_lift(shape, pt.location);
    const Vec2 v_unit = pt.direction.unit();

    if (const auto* poly = std::get_if<PolygonShape>(&shape.v); poly && !opt.force_dyadic_fit) {
        const auto vtx = poly->vertices();
        std::size_t iv = 0;
        double dv = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < vtx.size(); ++i) {
            const double d = (vtx[i] - lift).norm();
            if (d < dv) {
                dv = d;
                iv = i;
            }
        }
        if (dv <= 1e-5) {
            const Vec2 e_in = vtx[iv] - vtx[(iv + vtx.size() - 1) % vtx.size()];
            const Vec2 e_out = vtx[(iv + 1) % vtx.size()] - vtx[iv];
            const bool transverse =
                std::fabs(e_in.cross(v_unit)) > 1e-9 * e_in.norm() &&
                std::fabs(e_out.cross(v_unit)) > 1e-9 * e_out.norm();
            if (transverse) {
                est.order = 1.0;
                est.method = "polygon-vertex";
                fit_constants(shape, lift, pt, est, 1.0, radius);
            } else {
                est.method = "boundary-parallel";
            }
        } else {
            est.method = "boundary-parallel";  // interior of an edge on the line
        }
        pt.order = est;
        return pt.order;
    }

    if (std::holds_alternative<DiskShape>(shape.v) && !opt.force_dyadic_fit) {
        est.order = 2.0;
        est.method = "curvature";
        fit_constants(shape, lift, pt, est, 2.0, radius);
        pt.order = est;
        return est;
    }

    if (const auto* se = std::get_if<SuperEllipseShape>(&shape.v);
        se && !opt.force_dyadic_fit) {
        const Vec2 rel = lift - se->center;
        const double tol_axis = 1e-6;
        std::optional<double> analytic;
        if (std::fabs(std::fabs(rel.x) - se->a) < tol_axis && std::fabs(rel.y) < tol_axis)
            analytic = se->n;  // tangent line vertical, boundary deviates like |y|^n
        else if (std::fabs(std::fabs(rel.y) - se->b) < tol_axis && std::fabs(rel.x) < tol_axis)
            analytic = se->m;
        if (analytic) {
            est.order = *analytic;
            est.method = "superellipse-axis";
            fit_constants(shape, lift, pt, est, *analytic, radius);
            pt.order = est;
            return est;
        }
        // Away from the axes: curvature decides via the parametrization.
        const auto pos = [&](double th) { return superellipse_boundary_point(*se, th); };
        double th0 = 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 4096; ++i) {
            const double th = 2 * std::numbers::pi * i / 4096;
            const double d = (pos(th) - lift).norm2();
            if (d < best) {
                best = d;
                th0 = th;
            }
        }
        const double h = 1e-5;
        const Vec2 d1 = (pos(th0 + h) - pos(th0 - h)) / (2 * h);
        const Vec2 d2 = (pos(th0 + h) - pos(th0) * 2.0 + pos(th0 - h)) / (h * h);
        const double sp2 = d1.norm2();
        const double kappa =
            std::sqrt(std::max(0.0, d2.norm2() * sp2 - d2.dot(d1) * d2.dot(d1))) /
            (sp2 * std::sqrt(sp2));
        if (kappa > 1e-4) {
            est.order = 2.0;
            est.method = "curvature";
            fit_constants(shape, lift, pt, est, 2.0, radius);
            pt.order = est;
            return est;
        }
        // fall through to the dyadic fit
    }

    if (const auto* cs = std::get_if<CurveShape>(&shape.v); cs && !opt.force_dyadic_fit) {
        const auto pos = [&](double t) { return cs->curve->position(t); };
        const auto& dense = cs->curve->dense_boundary();
        std::size_t bi = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < dense.size(); ++i) {
            const double d = (dense[i] - lift).norm2();
            if (d < bd) {
                bd = d;
                bi = i;
            }
        }
        const double hcell = 1.0 / static_cast<double>(dense.size());
        const double t0 = golden_minimize(
                              [&](double t) { return (pos(t) - lift).norm2(); },
                              static_cast<double>(bi) * hcell - 1.5 * hcell,
                              static_cast<double>(bi) * hcell + 1.5 * hcell, 1e-14)
                              .first;
        const double kappa = cs->curve->curvature(t0);
        if (kappa > 1e-6) {
            est.order = 2.0;
            est.method = "curvature";
            fit_constants(shape, lift, pt, est, 2.0, radius);
            pt.order = est;
            return est;
        }
    }

    // Generic dyadic log-log fit, per side of the line.
    const auto samples = shape.boundary_points_near(lift, radius, 96);
    std::vector<Vec2> chart_points;
    chart_points.reserve(samples.size());
    for (const Vec2& p : samples) {
        const Vec2 d = p - lift;
        chart_points.push_back({d.dot(pt.chart.x_axis), d.dot(pt.chart.y_axis)});
    }
    const ChartOrderFit fit = dyadic_order_fit(chart_points, radius);
    est.side_orders = fit.side_orders;
    if (fit.boundary_parallel) {
        est.method = "boundary-parallel";
    } else if (fit.order) {
        est.order = fit.order;
        est.method = "dyadic-fit";
        fit_constants(shape, lift, pt, est, *est.order, radius);
    } else {
        est.method = "none";  // slope did not stabilize: report no order
    }
    pt.order = est;
    return est;
}

GlancingReport glancing_report(const DampingField& field, const GlancingOptions& opt,
                               const std::string& scene_name) {
    const DampingShape& shape = field.shape();
    if (!shape.properly_projected())
        throw std::domain_error("glancing_report: shape is not properly projected");

    GlancingReport report;
    report.scene_name = scene_name;
    const auto inr = shape.inradius();
    report.inradius = inr.value;
    report.inradius_upper = inr.upper_bound;
    report.candidate_directions = enumerate_candidate_directions(std::min(0.5, inr.value));

    std::vector<std::vector<GlancingLine>> per_dir(report.candidate_directions.size());
    parallel_for(
        static_cast<int>(report.candidate_directions.size()),
        [&](int i) {
            const RationalDirection v = report.candidate_directions[static_cast<std::size_t>(i)];
            auto lines = find_glancing_lines(shape, v, opt);
            for (auto& line : lines)
                line.touch_points = find_glancing_points(shape, line, opt);
            per_dir[static_cast<std::size_t>(i)] = std::move(lines);
        },
        opt.threads);
    for (auto& lines : per_dir)
        for (auto& line : lines) report.lines.push_back(std::move(line));

    // Feature size per point: distance to the nearest other glancing point.
    std::vector<GlancingPoint*> all_points;
    for (auto& line : report.lines)
        for (auto& pt : line.touch_points) all_points.push_back(&pt);
    const auto feature_of = [&](const GlancingPoint& pt) {
        double f = std::numeric_limits<double>::infinity();
        for (const GlancingPoint* other : all_points) {
            if (other == &pt) continue;
            const double d = torus_distance(pt.location, other->location);
            if (d > 1e-9) f = std::min(f, d);
        }
        return std::isfinite(f) ? f : 0.25;
    };
    for (GlancingPoint* pt : all_points) {
        estimate_order(field, *pt, feature_of(*pt), opt);
        if (!pt->order.order) report.all_orders_resolved = false;
    }

    report.g_empty = report.lines.empty();
    report.l1_empty = true;
    report.l2_empty = true;
    for (const auto& line : report.lines) {
        if (line.sided == Sidedness::one_sided) report.l1_empty = false;
        if (line.sided == Sidedness::two_sided) report.l2_empty = false;
    }
    return report;
}

nlohmann::json report_to_json(const GlancingReport& report) {
    nlohmann::json j;
    j["schema"] = "glance.report/1";
    j["scene"] = report.scene_name;
    j["inradius"] = {{"value", report.inradius}, {"upper_bound", report.inradius_upper}};
    j["flags"] = {{"l1_empty", report.l1_empty},
                  {"l2_empty", report.l2_empty},
                  {"g_empty", report.g_empty},
                  {"all_orders_resolved", report.all_orders_resolved}};
    auto dirs = nlohmann::json::array();
    for (const auto& v : report.candidate_directions) dirs.push_back({v.p, v.q});
    j["candidate_directions"] = dirs;
    auto lines = nlohmann::json::array();
    for (const auto& line : report.lines) {
        nlohmann::json lj;
        lj["direction"] = {line.direction.p, line.direction.q};
        lj["s_offset"] = line.s_offset;
        lj["sided"] = line.sided == Sidedness::one_sided ? "one_sided" : "two_sided";
        auto pts = nlohmann::json::array();
        for (const auto& pt : line.touch_points) {
            nlohmann::json pj;
            pj["location"] = {pt.location.x, pt.location.y};
            pj["t_offset"] = pt.t_offset;
            pj["sided"] = pt.sided == Sidedness::one_sided ? "one_sided" : "two_sided";
            pj["sided_indeterminate"] = pt.sided_indeterminate;
            pj["boundary_segment"] = pt.on_boundary_segment;
            pj["damping_exponent"] = pt.damping_exponent;
            if (pt.order.order) {
                pj["order"] = *pt.order.order;
                pj["c_in"] = pt.order.c_in;
                pj["c_out"] = pt.order.c_out;
                pj["sandwich_verified"] = pt.order.sandwich_verified;
            } else {
                pj["order"] = nullptr;
            }
            pj["method"] = pt.order.method;
            pts.push_back(std::move(pj));
        }
        lj["touch_points"] = std::move(pts);
        lines.push_back(std::move(lj));
    }
    j["lines"] = std::move(lines);
    return j;
}

std::string report_table(const GlancingReport& report) {
    std::ostringstream os;
    os << "scene: " << report.scene_name << "\n";
    os << "inradius: " << report.inradius << " (upper " << report.inradius_upper << ")\n";
    os << "candidate directions: " << report.candidate_directions.size()
       << " (full circle: " << 2 * report.candidate_directions.size() << ")\n";
    os << "flags: L1" << (report.l1_empty ? "=empty" : "!=empty") << "  L2"
       << (report.l2_empty ? "=empty" : "!=empty") << "  G"
       << (report.g_empty ? "=empty" : "!=empty") << "\n";
    os << "  dir        s-offset     sided       points\n";
    for (const auto& line : report.lines) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "  (%lld,%lld)%*s %.9f  %-10s  ",
                      static_cast<long long>(line.direction.p),
                      static_cast<long long>(line.direction.q), 4, "", line.s_offset,
                      line.sided == Sidedness::one_sided ? "one-sided" : "two-sided");
        os << buf << line.touch_points.size() << "\n";
        for (const auto& pt : line.touch_points) {
            os << "      point (" << pt.location.x << ", " << pt.location.y << ") "
               << (pt.sided == Sidedness::one_sided ? "one-sided" : "two-sided");
            if (pt.order.order)
                os << "  order=" << *pt.order.order;
            else
                os << "  order=none";
            os << " [" << pt.order.method << "]\n";
        }
    }
    return os.str();
}

}  // namespace glance
