#include "glance/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "glance/numerics.hpp"

namespace glance {

LineFieldView LineFieldView::of(const DampingField& field) {
    LineFieldView view;
    view.W = [&field](TorusPoint z) { return field.evaluate(z); };
    view.inside = [&field](TorusPoint z) { return field.inside(z); };
    return view;
}

namespace {

struct Chord {
    double lo, hi;
};

/// Chords of {inside} along the geodesic at offset s. Grid transitions are
/// bisected to machine precision; chord seeds recover chords thinner than
/// the grid.
std::vector<Chord> find_chords(const LineFieldView& field, const DirectionFrame& frame,
                               double s) {
    const double T = frame.t_circumference();
    const int n = std::max(1024, static_cast<int>(512.0 * std::ceil(T)));
    const double h = T / n;
    const auto in = [&](double t) { return field.inside(frame.point(s, t)); };

    std::vector<char> flag(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) flag[static_cast<std::size_t>(i)] = in(h * i) ? 1 : 0;

    const auto refine = [&](double a, double b) {
        // transition between in(a) != in(b)
        return bisect([&](double t) { return in(t) ? 1.0 : -1.0; }, a, b, 1e-14 * T);
    };

    std::vector<double> cuts;  // sorted transition positions
    for (int i = 0; i < n; ++i) {
        const bool cur = flag[static_cast<std::size_t>(i)];
        const bool nxt = flag[static_cast<std::size_t>((i + 1) % n)];
        if (cur != nxt) cuts.push_back(refine(h * i, h * (i + 1)));
    }

    std::vector<Chord> chords;
    if (cuts.empty()) {
        if (flag[0]) chords.push_back({0.0, T});  // fully inside
        // else: fully outside, no chords (seeds may still add thin ones)
    } else {
        // walk transitions pairwise; cuts[k] -> cuts[k+1] is a chord iff the
        // midpoint is inside
        for (std::size_t k = 0; k < cuts.size(); ++k) {
            const double a = cuts[k];
            const double b = k + 1 < cuts.size() ? cuts[k + 1] : cuts[0] + T;
            if (in(0.5 * (a + b))) chords.push_back({a, b});
        }
    }

    // Seed-based recovery of chords the grid missed entirely.
    for (const TorusPoint& seed : field.chord_seeds) {
        const double tc = frame.t_of(seed);
        if (!in(tc)) continue;
        bool covered = false;
        for (const Chord& c : chords) {
            const double tw = tc < c.lo ? tc + T : tc;
            if ((tc >= c.lo && tc <= c.hi) || (tw >= c.lo && tw <= c.hi)) covered = true;
        }
        if (covered) continue;
        // expand to the nearest outside points on both sides
        double lo = tc, hi = tc;
        double step = h;
        while (in(hi + step) && hi + step - tc < T) step *= 2.0;
        hi = refine(hi, hi + step);
        step = h;
        while (in(lo - step) && tc - (lo - step) < T) step *= 2.0;
        lo = refine(lo - step, lo);
        chords.push_back({lo, hi});
    }
    std::sort(chords.begin(), chords.end(), [](const Chord& a, const Chord& b) {
        return a.lo < b.lo;
    });
    return chords;
}

}  // namespace

AverageSample average_at(const LineFieldView& field, const DirectionFrame& frame, double s,
                         double rel_tol) {
    const double T = frame.t_circumference();
    AverageSample out;
    for (const Chord& c : find_chords(field, frame, s)) {
        const auto f = [&](double t) { return field.W(frame.point(s, t)); };
        const QuadratureResult q = integrate_adaptive(f, c.lo, c.hi, rel_tol);
        out.value += q.value;
        out.error += q.error;
    }
    out.value /= T;
    out.error /= T;
    out.value = std::max(0.0, out.value);
    return out;
}

AveragedProfile average_along(const LineFieldView& field, RationalDirection v, int s_count,
                              double rel_tol) {
    const DirectionFrame frame(v);
    const double c = frame.s_circumference();
    AveragedProfile profile;
    profile.direction = v;
    profile.s.resize(static_cast<std::size_t>(s_count));
    profile.value.resize(static_cast<std::size_t>(s_count));
    profile.quadrature_error.resize(static_cast<std::size_t>(s_count));
    for (int i = 0; i < s_count; ++i) {
        const double s = c * static_cast<double>(i) / s_count;
        const AverageSample a = average_at(field, frame, s, rel_tol);
        profile.s[static_cast<std::size_t>(i)] = s;
        profile.value[static_cast<std::size_t>(i)] = a.value;
        profile.quadrature_error[static_cast<std::size_t>(i)] = a.error;
    }
    return profile;
}

AverageSample torus_integral(const LineFieldView& field, bool transpose, double rel_tol) {
    // Slices along x (frame (1,0), s = y) or along y (frame (0,1)).
    const DirectionFrame frame(transpose ? RationalDirection{0, 1} : RationalDirection{1, 0});
    double err_acc = 0.0;
    const auto slice = [&](double s) {
        const AverageSample a = average_at(field, frame, s, 0.1 * rel_tol);
        err_acc += a.error;
        return a.value;  // already divided by T = 1
    };
    const QuadratureResult q = integrate_adaptive(slice, 0.0, 1.0, rel_tol);
    return {q.value, q.error + err_acc};
}

double fubini_gap(const LineFieldView& field, RationalDirection v, double rel_tol) {
    const DirectionFrame frame(v);
    const double T = frame.t_circumference();
    const auto prof = [&](double s) { return average_at(field, frame, s, 0.1 * rel_tol).value; };
    const QuadratureResult loop =
        integrate_adaptive(prof, 0.0, frame.s_circumference(), rel_tol);
    const double lhs = T * loop.value;
    const double rhs = torus_integral(field, v.p == 0, rel_tol).value;
    return std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-300);
}

ZeroSetStructure zero_set(const LineFieldView& field, const AveragedProfile& profile,
                          std::optional<std::vector<double>> line_offsets,
                          double zero_tol_factor) {
    const DirectionFrame frame(profile.direction);
    const double c = frame.s_circumference();
    const std::size_t n = profile.value.size();
    const double vmax = *std::max_element(profile.value.begin(), profile.value.end());
    ZeroSetStructure out;
    out.zero_tolerance = zero_tol_factor * vmax;

    if (vmax <= 0.0) return out;  // degenerate profile

    std::vector<char> zero(n);
    for (std::size_t i = 0; i < n; ++i) zero[i] = profile.value[i] <= out.zero_tolerance;

    // connected components on the circle
    std::vector<std::pair<std::size_t, std::size_t>> comps;  // [first, last] inclusive
    std::size_t start = 0;
    while (start < n && zero[start]) ++start;
    if (start == n) return out;  // identically zero profile: no structure to report
    for (std::size_t k = 0, i = start; k < n; ++k, i = (i + 1) % n) {
        if (!zero[i]) continue;
        std::size_t j = i, len = 1;
        while (zero[(j + 1) % n] && len < n) {
            j = (j + 1) % n;
            ++len;
        }
        comps.emplace_back(i, j);
        k += len - 1;
        i = j;
    }
    // dedupe wrap artifacts
    std::sort(comps.begin(), comps.end());
    comps.erase(std::unique(comps.begin(), comps.end()), comps.end());

    const double h = c / static_cast<double>(n);
    const auto value_at = [&](double s) { return average_at(field, frame, s, 1e-11).value; };
    const auto refine_edge = [&](double s_zero, double s_pos) {
        return bisect([&](double s) { return value_at(s) - out.zero_tolerance; }, s_zero, s_pos,
                      1e-11 * c);
    };

    for (const auto& [i, j] : comps) {
        const std::size_t len = (j + n - i) % n + 1;
        const double s_i = profile.s[i];
        const double s_j = profile.s[j];
        if (len < 3) {
            const auto [sm, vm] =
                golden_minimize(value_at, s_i - h, s_j + (s_j < s_i ? c : 0.0) + h, 1e-12 * c);
            (void)vm;
            out.points.push_back(sm - c * std::floor(sm / c));
        } else {
            double lo = refine_edge(s_i, s_i - h);  // component start: positive side below
            double hi = refine_edge(s_j, s_j + h);
            if (hi < lo) hi += c;
            out.intervals.push_back({lo, hi});
        }
    }

    if (line_offsets) {
        const auto match = [&](double s_edge) {
            for (double s0 : *line_offsets)
                if (circle_distance(s_edge, s0, c) < 1e-4 * c) return true;
            return false;
        };
        for (const auto& itv : out.intervals) {
            if (!match(itv.lo) || !match(itv.hi))
                throw ZeroSetMismatch("zero-set interval endpoint has no matching glancing line");
        }
        for (double p : out.points)
            if (!match(p))
                throw ZeroSetMismatch("zero-set point has no matching glancing line");
    }
    return out;
}

ExponentFit fit_vanishing_exponent(const LineFieldView& field, RationalDirection v, double edge,
                                   int side, double s_base, int scales) {
    const DirectionFrame frame(v);
    ExponentFit fit;
    for (int k = 0; k < scales; ++k) {
        const double d = s_base * std::pow(0.5, k);
        const double a = average_at(field, frame, edge + side * d, 1e-11).value;
        if (!(a > 0.0)) continue;
        fit.distances.push_back(d);
        fit.values.push_back(a);
    }
    std::reverse(fit.distances.begin(), fit.distances.end());
    std::reverse(fit.values.begin(), fit.values.end());
    if (fit.distances.size() >= 7) {
        const StabilizedSlope s =
            stabilized_loglog_slope(fit.distances, fit.values, 5, 3, 0.05);
        fit.exponent = s.slope;
        fit.max_deviation = s.max_deviation;
        fit.window_slopes = s.window_slopes;
    }
    return fit;
}

double c0_integral(double eta, double beta, double eps) {
    if (!(eta > 0.0) || !(beta > 0.0) || eps < 0.0 || eps > 1.0)
        throw std::domain_error("c0_integral: need eta, beta > 0 and eps in [0, 1]");
    if (eps == 0.0) return 0.0;
    const double upper = std::pow(eps, 1.0 / eta);
    const auto f = [&](double u) { return std::pow(1.0 - std::pow(u, eta), beta); };
    return 2.0 * integrate_adaptive(f, 0.0, upper, 1e-13).value;
}

}  // namespace glance
