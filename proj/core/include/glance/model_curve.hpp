#pragma once

#include <cstdint>
#include <vector>

#include "glance/geometry.hpp"

namespace glance {

/// The model boundary curve {(x, y) : c |y|^eta = x}, the local normal form
/// of a damping-set boundary hugging a glancing line to power eta.
struct ModelCurve {
    double eta{1.0};
    double c{1.0};

    ModelCurve(double eta_, double c_);

    /// x-coordinate of the curve at height y.
    double x_at(double y) const;

    /// Distance from a point with x0 >= 0 to the curve. Closed form
    /// |c*y0 - x0| / sqrt(1 + c^2) when eta = 1; otherwise a dense
    /// parametric scan refined by golden section to ~1e-10.
    double distance(Vec2 point) const;

    /// Two-sided comparison ratio dist / | |y|^eta - x/c |   (eta >= 1)
    ///                        dist / | |y| - (x/c)^(1/eta) | (eta <= 1),
    /// the quantity the sandwich bounds control near the origin.
    double sandwich_ratio(Vec2 point) const;
};

/// Empirical sandwich constants over a random cloud in the eps-box
/// {0 <= x < eps, |y| < eps}. Points landing on the curve are skipped.
struct SandwichReport {
    double ratio_min{0.0};
    double ratio_max{0.0};
    int accepted{0};
    int skipped{0};
};
SandwichReport sandwich_check(const ModelCurve& curve, double eps, int samples,
                              std::uint64_t seed);

}  // namespace glance
