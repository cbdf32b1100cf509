#include "glance/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glance {
namespace {

// Gauss7/Kronrod15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.000000000000000, 0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759, 0.991455371120813};
constexpr double kKronrodWeights[8] = {
    0.209482141084728, 0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kGaussWeights[4] = {
    0.417959183673469, 0.381830050505119, 0.279705391489277, 0.129484966168870};

struct PanelEstimate {
    double value;
    double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double k = kKronrodWeights[0] * f0;
    double g = kGaussWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * kKronrodNodes[i];
        const double fi = f(mid + dx) + f(mid - dx);
        k += kKronrodWeights[i] * fi;
        if (i % 2 == 0) g += kGaussWeights[i / 2] * fi;
    }
    k *= half;
    g *= half;
    const double diff = std::fabs(k - g);
    return {k, std::pow(200.0 * diff, 1.5)};
}

void integrate_panel(const std::function<double(double)>& f, double a, double b, double tol,
                     int depth, int max_depth, double& value, double& error, bool& converged) {
    const PanelEstimate e = gk15(f, a, b);
    if (e.error <= tol || depth >= max_depth) {
        value += e.value;
        error += e.error;
        if (e.error > tol && depth >= max_depth) converged = false;
        return;
    }
    const double mid = 0.5 * (a + b);
    integrate_panel(f, a, mid, 0.5 * tol, depth + 1, max_depth, value, error, converged);
    integrate_panel(f, mid, b, 0.5 * tol, depth + 1, max_depth, value, error, converged);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return {0.0, 0.0, true};
    // First pass with a provisional absolute tolerance, second pass scaled by
    // the magnitude found; cheap because converged panels are wide.
    PanelEstimate coarse = gk15(f, a, b);
    const double scale = std::max(std::fabs(coarse.value), abs_tol);
    const double tol = std::max(abs_tol, rel_tol * scale);

    QuadratureResult out;
    integrate_panel(f, a, b, tol, 0, max_depth, out.value, out.error, out.converged);

    // If the first magnitude guess was far off, redo with the settled scale.
    const double settled = std::max(abs_tol, rel_tol * std::fabs(out.value));
    if (settled < 0.25 * tol) {
        QuadratureResult redo;
        integrate_panel(f, a, b, settled, 0, max_depth, redo.value, redo.error, redo.converged);
        return redo;
    }
    return out;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect: no sign change on bracket");
    while (hi - lo > x_tol) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::pair<double, double> golden_minimize(const std::function<double(double)>& f, double lo,
                                          double hi, double x_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > x_tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    const double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line: need >= 2 points");
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit fit;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual = std::max(fit.max_residual,
                                    std::fabs(y[i] - fit.slope * x[i] - fit.intercept));
    return fit;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_loglog: inputs must be positive");
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    return fit_line(lx, ly);
}

StabilizedSlope stabilized_loglog_slope(std::span<const double> x, std::span<const double> y,
                                        int window, int run, double slope_tol) {
    StabilizedSlope out;
    if (static_cast<int>(x.size()) < window + run - 1) return out;
    for (std::size_t i = 0; i + window <= x.size(); ++i) {
        out.window_slopes.push_back(
            fit_loglog(x.subspan(i, window), y.subspan(i, window)).slope);
    }
    // Prefer the deepest (smallest-scale) stabilized run: scan from the end.
    for (int i = static_cast<int>(out.window_slopes.size()) - run; i >= 0; --i) {
        double lo = out.window_slopes[i], hi = lo;
        for (int j = i; j < i + run; ++j) {
            lo = std::min(lo, out.window_slopes[j]);
            hi = std::max(hi, out.window_slopes[j]);
        }
        if (hi - lo <= slope_tol) {
            double mean = 0.0;
            for (int j = i; j < i + run; ++j) mean += out.window_slopes[j];
            out.slope = mean / run;
            out.max_deviation = hi - lo;
            return out;
        }
    }
    return out;
}

}  // namespace glance
