#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "glance/scene.hpp"

using namespace glance;
namespace fs = std::filesystem;

namespace {
const fs::path kScenes{GLANCE_SCENES_DIR};
}

TEST_CASE("all bundled scenes load") {
    for (const char* name :
         {"disk", "strip", "square", "square_rot30", "superellipse", "circle", "gcc",
          "line_complement"}) {
        const Scene scene = load_scene(kScenes / (std::string(name) + ".json"));
        CHECK(scene.name == name);
        CHECK(scene.beta > 0.0);
    }
}

TEST_CASE("disk scene geometry round trip") {
    const Scene scene = load_scene(kScenes / "disk.json");
    CHECK(scene.shape.inradius().value == doctest::Approx(0.35355339059327373));
    const auto j = shape_to_json(scene.shape);
    CHECK(j.at("kind") == "disk");
    const DampingShape again = shape_from_json(j);
    CHECK(again.contains(TorusPoint{0.5, 0.5}));
}

TEST_CASE("schema violations produce invalid_argument") {
    CHECK_THROWS_AS(parse_scene(nlohmann::json::parse(R"({"beta": 9.0})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_scene(nlohmann::json::parse(R"({"shape": {"kind": "sphere"}, "beta": 1.0})")),
        std::invalid_argument);
    CHECK_THROWS_AS(parse_scene(nlohmann::json::parse(
                        R"({"shape": {"kind": "disk", "center": [0.5, 0.5], "radius": -1}})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        parse_scene(nlohmann::json::parse(
            R"({"shape": {"kind": "disk", "center": [0.5], "radius": 0.2}})")),
        std::invalid_argument);
    // malformed JSON file
    const fs::path tmp = fs::temp_directory_path() / "glance_bad_scene.json";
    std::ofstream(tmp) << "{ not json";
    CHECK_THROWS_AS(load_scene(tmp), std::invalid_argument);
    fs::remove(tmp);
}

TEST_CASE("overrides and analysis options parse") {
    const auto doc = nlohmann::json::parse(R"({
      "shape": {"kind": "disk", "center": [0.5, 0.5], "radius": 0.3},
      "beta": 2.0,
      "overrides": [{"location": [0.5, 0.8], "exponent": 4.0, "radius": 0.02}],
      "support_cutoff": 0.1,
      "analysis": {"lambda_min": 10.0, "lambda_max": 1000.0, "lambda_points": 5, "seed": 7}
    })");
    const Scene scene = parse_scene(doc);
    REQUIRE(scene.overrides.size() == 1);
    CHECK(scene.overrides[0].exponent == 4.0);
    CHECK(scene.support_cutoff == doctest::Approx(0.1));
    CHECK(scene.options.lambda_points == 5);
    CHECK(scene.options.seed == 7);
    const DampingField field = scene.field();
    CHECK(field.exponent_at(TorusPoint{0.5, 0.8}) == 4.0);
}
