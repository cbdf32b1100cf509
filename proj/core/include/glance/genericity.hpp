#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glance/directions.hpp"
#include "glance/shapes.hpp"

namespace glance {

/// Candidate directions attached to a shape through its inradius:
/// k = floor(1/r) + 1 and the direction set for radius 1/k.
struct CandidateDirectionSet {
    int k{1};
    std::vector<RationalDirection> directions;
};
CandidateDirectionSet candidate_set_for(const DampingShape& shape);

struct PolygonMembership {
    bool in_class{false};
    /// On failure: offending edge index and the matched direction.
    std::optional<std::pair<int, RationalDirection>> witness;
    bool exact_arithmetic{false};  // integer cross products were available
};

/// True iff no edge direction of P matches a candidate direction (exact
/// integer cross-product test when the edges carry rational coordinates,
/// relative tolerance 1e-12 otherwise). Requires a non-degenerate simple
/// properly-projected polygon.
PolygonMembership polygon_in_Q(const DampingShape& polygon);

/// Angles theta (in [0, pi), unoriented alignment) at which some rotated
/// edge becomes parallel to a candidate direction, restricted to rotations
/// that stay properly projected. Sorted, deduplicated; at most n*|candidates|.
std::vector<double> polygon_exceptional_rotations(const DampingShape& polygon);

/// kappa(gamma(t)) + prod_{+-} prod_candidates |unit tangent +- unit v|.
double curve_f_gamma(const SmoothCurve& curve, double t,
                     const std::vector<RationalDirection>& candidates);

struct CurveMembership {
    bool in_class{false};
    bool indeterminate{false};  // certification inconclusive at tolerance
    double min_value{0.0};
    double argmin{0.0};
};

/// Grid minimization of f_gamma with a sampled-derivative Lipschitz
/// certificate on every cell.
CurveMembership curve_in_Y(const DampingShape& curve_shape);

struct AngleInterval {
    double lo, hi;
};

struct RotationDiagnostics {
    std::vector<AngleInterval> critical_directions;  // outer cover of tangent
                                                     // directions with kappa = 0
    std::vector<AngleInterval> exceptional_cover;    // outer cover of K
    double measure_estimate{0.0};
    double resolution{0.0};
};

/// Outer cover of the exceptional rotation set: tangent directions at
/// curvature zeros, rotated onto each candidate angle.
RotationDiagnostics curve_exceptional_rotation_set(const DampingShape& curve_shape,
                                                   double angular_resolution);

nlohmann::json genericity_to_json(const PolygonMembership& m);
nlohmann::json genericity_to_json(const CurveMembership& m);
nlohmann::json genericity_to_json(const RotationDiagnostics& d);

}  // namespace glance
