#pragma once

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace glance {

/// Result of an adaptive quadrature: value plus an error estimate that the
/// refinement loop drove below its tolerance target.
struct QuadratureResult {
    double value{0.0};
    double error{0.0};
    bool converged{true};
};

/// Adaptive Gauss7/Kronrod15 on [a, b]. Splits intervals until the summed
/// error estimate meets max(abs_tol, rel_tol * |integral|).
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double rel_tol = 1e-12, double abs_tol = 1e-300,
                                    int max_depth = 48);

/// Bisection refinement of a sign change of f on [lo, hi]; assumes
/// f(lo) and f(hi) have opposite signs (zero counts as either).
double bisect(const std::function<double(double)>& f, double lo, double hi, double x_tol);

/// Golden-section minimization on [lo, hi] for a unimodal objective;
/// returns (argmin, min value).
std::pair<double, double> golden_minimize(const std::function<double(double)>& f, double lo,
                                          double hi, double x_tol);

/// Ordinary least squares for y = slope * x + intercept.
struct LineFit {
    double slope{0.0};
    double intercept{0.0};
    double max_residual{0.0};
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log(y) against log(x); inputs must be positive.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Looks for a run of `window` consecutive sliding-window slopes of
/// log y vs log x that agree within `slope_tol`; returns the stabilized
/// slope (mean over the run) or nullopt, plus all candidate slopes.
struct StabilizedSlope {
    std::optional<double> slope;
    double max_deviation{0.0};          // spread inside the accepted run
    std::vector<double> window_slopes;  // all sliding-window slopes, for diagnostics
};
StabilizedSlope stabilized_loglog_slope(std::span<const double> x, std::span<const double> y,
                                        int window = 4, int run = 3, double slope_tol = 0.05);

}  // namespace glance
