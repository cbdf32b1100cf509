#include "glance/scene.hpp"

#include <fstream>

namespace glance {

using nlohmann::json;

namespace {

Vec2 vec2_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument(std::string("scene: ") + what + " must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json vec2_to(Vec2 v) { return json::array({v.x, v.y}); }

double positive_number(const json& j, const char* what) {
    if (!j.is_number() || !(j.get<double>() > 0.0))
        throw std::invalid_argument(std::string("scene: ") + what + " must be a positive number");
    return j.get<double>();
}

}  // namespace

DampingShape shape_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("scene: shape must be an object with a \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "disk") {
        return make_disk(vec2_from(j.at("center"), "disk center"),
                         positive_number(j.at("radius"), "disk radius"));
    }
    if (kind == "polygon") {
        if (j.contains("vertices")) {
            std::vector<Vec2> vtx;
            for (const auto& row : j.at("vertices")) vtx.push_back(vec2_from(row, "vertex"));
            return make_polygon_from_vertices(vtx);
        }
        std::vector<Vec2> edges;
        for (const auto& row : j.at("edges")) edges.push_back(vec2_from(row, "edge"));
        return make_polygon(std::move(edges), vec2_from(j.at("anchor"), "anchor"));
    }
    if (kind == "superellipse") {
        const auto& ax = j.at("semi_axes");
        const auto& ex = j.at("exponents");
        return make_superellipse(vec2_from(j.at("center"), "center"),
                                 positive_number(ax.at(0), "semi-axis a"),
                                 positive_number(ax.at(1), "semi-axis b"),
                                 positive_number(ex.at(0), "exponent m"),
                                 positive_number(ex.at(1), "exponent n"));
    }
    if (kind == "strip") {
        const auto& nj = j.at("normal");
        const RationalDirection normal(nj.at(0).get<std::int64_t>(),
                                       nj.at(1).get<std::int64_t>());
        const auto& itv = j.at("interval");
        return make_strip(normal, itv.at(0).get<double>(), itv.at(1).get<double>());
    }
    if (kind == "circle_curve") {
        return make_curve(SmoothCurve::circle(vec2_from(j.at("center"), "center"),
                                              positive_number(j.at("radius"), "radius")));
    }
    if (kind == "ellipse_curve") {
        const auto& ax = j.at("semi_axes");
        return make_curve(SmoothCurve::ellipse(
            vec2_from(j.at("center"), "center"), positive_number(ax.at(0), "semi-axis a"),
            positive_number(ax.at(1), "semi-axis b"), j.value("tilt", 0.0)));
    }
    if (kind == "superellipse_curve") {
        const auto& ax = j.at("semi_axes");
        return make_curve(SmoothCurve::superellipse(
            vec2_from(j.at("center"), "center"), positive_number(ax.at(0), "semi-axis a"),
            positive_number(ax.at(1), "semi-axis b"), j.at("exponent").get<int>()));
    }
    if (kind == "sampled_curve") {
        std::vector<Vec2> pos, vel, acc;
        for (const auto& row : j.at("position")) pos.push_back(vec2_from(row, "position row"));
        for (const auto& row : j.at("velocity")) vel.push_back(vec2_from(row, "velocity row"));
        for (const auto& row : j.at("acceleration"))
            acc.push_back(vec2_from(row, "acceleration row"));
        return make_curve(SmoothCurve::from_samples(std::move(pos), std::move(vel), std::move(acc)));
    }
    if (kind == "union") {
        std::vector<DampingShape> parts;
        for (const auto& part : j.at("shapes")) parts.push_back(shape_from_json(part));
        return make_union(std::move(parts));
    }
    throw std::invalid_argument("scene: unknown shape kind \"" + kind + "\"");
}

json shape_to_json(const DampingShape& shape) {
    json j;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, PolygonShape>) {
                j["kind"] = "polygon";
                j["anchor"] = vec2_to(s.anchor);
                json edges = json::array();
                for (const Vec2& e : s.edges) edges.push_back(vec2_to(e));
                j["edges"] = edges;
            } else if constexpr (std::is_same_v<T, DiskShape>) {
                j["kind"] = "disk";
                j["center"] = vec2_to(s.center);
                j["radius"] = s.radius;
            } else if constexpr (std::is_same_v<T, SuperEllipseShape>) {
                j["kind"] = "superellipse";
                j["center"] = vec2_to(s.center);
                j["semi_axes"] = json::array({s.a, s.b});
                j["exponents"] = json::array({s.m, s.n});
            } else if constexpr (std::is_same_v<T, CurveShape>) {
                j["kind"] = "curve";
                j["curve_kind"] = s.curve->kind();
            } else if constexpr (std::is_same_v<T, StripShape>) {
                j["kind"] = "strip";
                j["normal"] = json::array({s.normal.p, s.normal.q});
                j["interval"] = json::array({s.lo, s.hi});
            } else {
                j["kind"] = "union";
                json parts = json::array();
                for (const auto& p : s.parts) parts.push_back(shape_to_json(*p));
                j["shapes"] = parts;
            }
        },
        shape.v);
    return j;
}

Scene parse_scene(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("scene: document must be a JSON object");
    if (!doc.contains("shape")) throw std::invalid_argument("scene: missing \"shape\"");

    Scene scene{shape_from_json(doc.at("shape")),
                doc.contains("beta") ? positive_number(doc.at("beta"), "beta") : 9.0,
                {},
                std::nullopt,
                {},
                doc.value("name", std::string("scene"))};

    if (doc.contains("overrides")) {
        for (const auto& o : doc.at("overrides")) {
            ExponentOverride ov;
            ov.location = TorusPoint{vec2_from(o.at("location"), "override location")};
            ov.exponent = positive_number(o.at("exponent"), "override exponent");
            ov.radius = o.contains("radius") ? positive_number(o.at("radius"), "override radius")
                                             : 0.05;
            scene.overrides.push_back(ov);
        }
    }
    if (doc.contains("support_cutoff") && !doc.at("support_cutoff").is_null())
        scene.support_cutoff = positive_number(doc.at("support_cutoff"), "support_cutoff");

    if (doc.contains("analysis")) {
        const auto& a = doc.at("analysis");
        AnalysisOptions& o = scene.options;
        if (a.contains("s_resolution_factor"))
            o.s_resolution_factor = positive_number(a.at("s_resolution_factor"), "s_resolution_factor");
        if (a.contains("miss_tolerance"))
            o.miss_tolerance = positive_number(a.at("miss_tolerance"), "miss_tolerance");
        if (a.contains("touch_tolerance"))
            o.touch_tolerance = positive_number(a.at("touch_tolerance"), "touch_tolerance");
        if (a.contains("zero_tolerance_factor"))
            o.zero_tolerance_factor =
                positive_number(a.at("zero_tolerance_factor"), "zero_tolerance_factor");
        if (a.contains("lambda_min")) o.lambda_min = positive_number(a.at("lambda_min"), "lambda_min");
        if (a.contains("lambda_max")) o.lambda_max = positive_number(a.at("lambda_max"), "lambda_max");
        if (a.contains("lambda_points")) o.lambda_points = a.at("lambda_points").get<int>();
        if (a.contains("seed")) o.seed = a.at("seed").get<std::uint64_t>();
        if (o.lambda_max <= o.lambda_min || o.lambda_points < 2)
            throw std::invalid_argument("scene: invalid lambda range");
    }
    return scene;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("scene: cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("scene: malformed JSON: ") + e.what());
    }
    Scene scene = parse_scene(doc);
    if (scene.name == "scene") scene.name = path.stem().string();
    return scene;
}

}  // namespace glance
