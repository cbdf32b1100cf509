#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "glance/damping_field.hpp"
#include "glance/directions.hpp"

namespace glance {

/// What directional averaging needs from a damping coefficient: evaluation,
/// the open-support predicate, and (optionally) longitudinal centers near
/// which chords can pinch off too thin for grid detection.
struct LineFieldView {
    std::function<double(TorusPoint)> W;
    std::function<bool(TorusPoint)> inside;
    std::vector<TorusPoint> chord_seeds;  // e.g. glancing points

    static LineFieldView of(const DampingField& field);
};

struct AveragedProfile {
    RationalDirection direction;
    std::vector<double> s;
    std::vector<double> value;
    std::vector<double> quadrature_error;
};

struct AverageSample {
    double value{0.0};
    double error{0.0};
};

/// Mean of W over the closed geodesic at transverse offset s: chords located
/// by predicate bisection (seeded both by a grid and by chord_seeds), each
/// integrated by adaptive quadrature.
AverageSample average_at(const LineFieldView& field, const DirectionFrame& frame, double s,
                         double rel_tol = 1e-11);

AveragedProfile average_along(const LineFieldView& field, RationalDirection v, int s_count,
                              double rel_tol = 1e-11);

/// Integral of W over the torus by adaptive slicing; `transpose` slices
/// along x instead of y (two independent evaluation routes).
AverageSample torus_integral(const LineFieldView& field, bool transpose = false,
                             double rel_tol = 1e-10);

/// Relative Fubini mismatch | T_v * ∮A_v ds - ∬W | / ∬W for direction v.
double fubini_gap(const LineFieldView& field, RationalDirection v, double rel_tol = 1e-10);

struct ZeroSetStructure {
    struct Interval {
        double lo, hi;
    };
    std::vector<Interval> intervals;
    std::vector<double> points;
    double zero_tolerance{0.0};
};

/// Thrown when a zero-set component endpoint has no matching glancing line:
/// the geometry is under-resolved.
struct ZeroSetMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Connected components of {A_v <= zero_tol}; components narrower than three
/// grid cells collapse to points; endpoints are refined by direct evaluation
/// and, when line offsets are supplied, matched against them.
ZeroSetStructure zero_set(const LineFieldView& field, const AveragedProfile& profile,
                          std::optional<std::vector<double>> line_offsets = std::nullopt,
                          double zero_tol_factor = 1e-12);

struct ExponentFit {
    std::optional<double> exponent;
    double max_deviation{0.0};
    std::vector<double> window_slopes;
    std::vector<double> distances;
    std::vector<double> values;
};

/// Log-log slope of A_v against the distance to a zero-set component edge,
/// over `scales` dyadic refinements of `s_base` on the given side (+1/-1).
ExponentFit fit_vanishing_exponent(const LineFieldView& field, RationalDirection v, double edge,
                                   int side, double s_base, int scales = 12);

/// c0(eps) with Int_{|t|^eta <= eps k} (k - |t|^eta)^beta dt = c0(eps) k^(beta + 1/eta).
/// Evaluated as 2*Int_0^(eps^(1/eta)) (1 - u^eta)^beta du, which absorbs the
/// endpoint singularity of the defining form.
double c0_integral(double eta, double beta, double eps);

}  // namespace glance
