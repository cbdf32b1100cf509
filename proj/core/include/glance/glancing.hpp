#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "glance/damping_field.hpp"
#include "glance/directions.hpp"
#include "glance/shapes.hpp"

namespace glance {

enum class Sidedness { one_sided, two_sided };

/// Affine chart (x, y) about a glancing point: y runs along the line,
/// x transversally with +x pointing into the damped side; the line itself
/// maps to {x = 0}. `x_scale` is the normalization applied after the order
/// fit so the fitted constants land in a canonical range.
struct LocalChart {
    TorusPoint origin;
    Vec2 x_axis;  // unit, transverse
    Vec2 y_axis;  // unit, along the line
    double x_scale{1.0};
    double radius{0.01};
};

struct OrderEstimate {
    std::optional<double> order;  // eta; nullopt means no_order
    double c_in{0.0};             // fitted inner constant (> 1 when valid)
    double c_out{0.0};            // fitted outer constant (> c_in when valid)
    bool sandwich_verified{false};
    std::vector<double> side_orders;  // per-side fits that contributed
    std::string method;               // polygon-vertex | curvature | superellipse-axis |
                                      // dyadic-fit | boundary-parallel | none
};

struct GlancingPoint {
    TorusPoint location;
    RationalDirection direction;
    double t_offset{0.0};  // longitudinal position on its line
    Sidedness sided{Sidedness::one_sided};
    bool sided_indeterminate{false};
    bool on_boundary_segment{false};  // represents an interval of touching boundary
    OrderEstimate order;
    LocalChart chart;
    double damping_exponent{0.0};  // field exponent in effect at the point
};

struct GlancingLine {
    RationalDirection direction;
    double s_offset{0.0};  // in [0, 1/T_v)
    Sidedness sided{Sidedness::one_sided};
    std::vector<GlancingPoint> touch_points;
};

struct GlancingReport {
    std::string scene_name;
    double inradius{0.0};
    double inradius_upper{0.0};
    std::vector<RationalDirection> candidate_directions;
    std::vector<GlancingLine> lines;
    bool l1_empty{true};
    bool l2_empty{true};
    bool g_empty{true};
    bool all_orders_resolved{true};
};

struct GlancingOptions {
    double s_resolution_factor{1e-3};  // fraction of the s-circumference
    double enter_tolerance{1e-9};      // reach above this counts as entering omega
    double touch_tolerance{1e-6};      // boundary proximity that counts as touching
    double s_refine_tolerance{1e-9};
    double chart_radius_factor{1e-2};  // chart radius as a fraction of feature size
    std::optional<double> chart_radius_override;
    bool force_dyadic_fit{false};      // skip analytic fast paths (cross-checks)
    int threads{0};                    // 0 = GLANCE_THREADS or hardware
};

/// Dyadic log-log order fit from chart-coordinate boundary samples
/// (x transverse, |side| split by sign of y). The order is the
/// flatter-side slope; boundary_parallel marks data hugging {x = 0}.
struct ChartOrderFit {
    std::optional<double> order;
    std::vector<double> side_orders;
    bool boundary_parallel{false};
};
ChartOrderFit dyadic_order_fit(const std::vector<Vec2>& chart_points, double radius);

/// Max over the geodesic at offset s of the signed distance to the boundary
/// (positive inside omega). Negative reach = the line misses the closure by
/// |reach|; |reach| ~ 0 = tangency; positive = enters the open region.
double line_reach(const DampingShape& shape, const DirectionFrame& frame, double s,
                  int base_samples = 1024);

std::vector<GlancingLine> find_glancing_lines(const DampingShape& shape, RationalDirection v,
                                              const GlancingOptions& opt = {});

Sidedness classify_line(const DampingShape& shape, const DirectionFrame& frame, double s_offset,
                        const GlancingOptions& opt = {});

std::vector<GlancingPoint> find_glancing_points(const DampingShape& shape,
                                                const GlancingLine& line,
                                                const GlancingOptions& opt = {});

/// Order of a glancing point with fitted sandwich constants. `feature_size`
/// sets the chart scale (distance to the nearest other glancing feature).
OrderEstimate estimate_order(const DampingField& field, GlancingPoint& point,
                             double feature_size, const GlancingOptions& opt = {});

GlancingReport glancing_report(const DampingField& field, const GlancingOptions& opt = {},
                               const std::string& scene_name = "scene");

nlohmann::json report_to_json(const GlancingReport& report);
std::string report_table(const GlancingReport& report);

}  // namespace glance
