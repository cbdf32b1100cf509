#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "glance/damping_field.hpp"

namespace glance {

/// Analysis knobs carried by a scene document. Every tolerance is positive;
/// defaults match the library defaults.
struct AnalysisOptions {
    double s_resolution_factor{1e-3};  // s step as a fraction of 1/T_v
    double miss_tolerance{1e-12};      // max W on a line that still counts as missing
    double touch_tolerance{1e-6};      // distance to the boundary that counts as touching
    double zero_tolerance_factor{1e-12};
    double lambda_min{1e2};
    double lambda_max{1e5};
    int lambda_points{9};
    std::uint64_t seed{20240801};
};

/// A scene: damping geometry plus exponent data and analysis options.
struct Scene {
    DampingShape shape;
    double beta{9.0};
    std::vector<ExponentOverride> overrides;
    std::optional<double> support_cutoff;
    AnalysisOptions options;
    std::string name{"scene"};

    DampingField field() const { return {shape, beta, overrides, support_cutoff}; }
};

/// Parses the JSON scene document. Throws std::invalid_argument with a
/// human-readable message on schema violations.
Scene parse_scene(const nlohmann::json& doc);
Scene load_scene(const std::filesystem::path& path);

/// Shape (de)serialization used by scenes and reports.
nlohmann::json shape_to_json(const DampingShape& shape);
DampingShape shape_from_json(const nlohmann::json& j);

}  // namespace glance
