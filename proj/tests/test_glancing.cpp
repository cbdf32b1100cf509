#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "glance/glancing.hpp"

using namespace glance;

namespace {
const Vec2 kCenter{0.5, 0.5};
const double kDiskR = 0.35355339059327373;  // diameter 1/sqrt(2)

int count_lines(const GlancingReport& r, RationalDirection v) {
    int n = 0;
    for (const auto& line : r.lines)
        if (line.direction == v) ++n;
    return n;
}
}  // namespace

TEST_CASE("disk: line finding per direction") {
    const DampingShape disk = make_disk(kCenter, kDiskR);
    SUBCASE("horizontal: two one-sided tangent lines") {
        const auto lines = find_glancing_lines(disk, RationalDirection{1, 0});
        REQUIRE(lines.size() == 2);
        for (const auto& line : lines) CHECK(line.sided == Sidedness::one_sided);
        // tangents at y = 0.5 +- r; s-offset for (1,0) is the y coordinate
        std::vector<double> offsets{lines[0].s_offset, lines[1].s_offset};
        std::sort(offsets.begin(), offsets.end());
        CHECK(offsets[0] == doctest::Approx(0.5 - kDiskR).epsilon(1e-7));
        CHECK(offsets[1] == doctest::Approx(0.5 + kDiskR).epsilon(1e-7));
    }
    SUBCASE("diagonal: a single two-sided line") {
        const auto lines = find_glancing_lines(disk, RationalDirection{1, 1});
        REQUIRE(lines.size() == 1);
        CHECK(lines[0].sided == Sidedness::two_sided);
    }
    SUBCASE("non-candidate direction (1,2): no glancing lines") {
        const auto lines = find_glancing_lines(disk, RationalDirection{1, 2});
        CHECK(lines.empty());
    }
}

TEST_CASE("disk report matches the reference counts") {
    const DampingField field(make_disk(kCenter, kDiskR), 9.0);
    const GlancingReport report = glancing_report(field);

    CHECK(report.candidate_directions.size() == 4);  // 8 counting both signs
    CHECK(report.lines.size() == 6);
    CHECK(count_lines(report, RationalDirection{1, 0}) == 2);
    CHECK(count_lines(report, RationalDirection{0, 1}) == 2);
    CHECK(count_lines(report, RationalDirection{1, 1}) == 1);
    CHECK(count_lines(report, RationalDirection{1, -1}) == 1);

    for (const auto& line : report.lines) {
        const bool axis = line.direction.p == 0 || line.direction.q == 0;
        CHECK(line.sided == (axis ? Sidedness::one_sided : Sidedness::two_sided));
        CHECK(line.touch_points.size() == (axis ? 1 : 2));
        for (const auto& pt : line.touch_points) {
            // every touch point sits on the disk boundary
            CHECK(torus_distance(pt.location, TorusPoint{kCenter}) ==
                  doctest::Approx(kDiskR).epsilon(1e-5));
            // tangency points have order 2 with verified sandwich constants
            REQUIRE(pt.order.order.has_value());
            CHECK(*pt.order.order == doctest::Approx(2.0));
            CHECK(pt.order.c_out > pt.order.c_in);
            CHECK(pt.order.c_in > 1.0);
            CHECK(pt.order.sandwich_verified);
            // two-sided lines here carry one-sided points
            CHECK(pt.sided == Sidedness::one_sided);
        }
    }
    CHECK_FALSE(report.l1_empty);
    CHECK_FALSE(report.l2_empty);
    CHECK_FALSE(report.g_empty);
    CHECK(report.all_orders_resolved);

    // m(s) sanity on a one-sided line: misses at the line, enters inside
    const DirectionFrame frame{RationalDirection{1, 0}};
    const double s_top = 0.5 + kDiskR;
    CHECK(line_reach(field.shape(), frame, s_top) == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(line_reach(field.shape(), frame, s_top - 0.01) > 0.0);
    CHECK(line_reach(field.shape(), frame, s_top + 0.01) < 0.0);
}

TEST_CASE("lemma soundness: directions beyond the period bound stay empty") {
    const DampingShape disk = make_disk(kCenter, kDiskR);
    // scan rational directions with period up to twice the candidate bound
    const double bound = 1.0 / (2.0 * kDiskR);
    for (const auto& v :
         {RationalDirection{1, 2}, RationalDirection{2, 1}, RationalDirection{2, -1},
          RationalDirection{1, -2}}) {
        CHECK(v.period() <= 2.0 * bound);
        CHECK(v.period() > bound);
        CHECK(find_glancing_lines(disk, v).empty());
    }
}

TEST_CASE("strip: vertical edges are one-sided glancing lines") {
    const DampingShape strip = make_strip(RationalDirection{1, 0}, 0.15, 0.85);
    const auto lines = find_glancing_lines(strip, RationalDirection{0, 1});
    REQUIRE(lines.size() == 2);
    for (const auto& line : lines) CHECK(line.sided == Sidedness::one_sided);
    CHECK(find_glancing_lines(strip, RationalDirection{1, 0}).empty());
    CHECK(find_glancing_lines(strip, RationalDirection{1, 1}).empty());

    // whole-edge touching: representative points carry no order
    const DampingField field(strip, 9.0);
    const GlancingReport report = glancing_report(field);
    CHECK(report.lines.size() == 2);
    CHECK_FALSE(report.all_orders_resolved);
    for (const auto& line : report.lines)
        for (const auto& pt : line.touch_points) {
            CHECK_FALSE(pt.order.order.has_value());
            CHECK(pt.on_boundary_segment);
        }
}

TEST_CASE("axis-aligned square: edge lines glance, vertices have no order") {
    const DampingField field(make_polygon_from_vertices(
                                 {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}}),
                             9.0);
    const GlancingReport report = glancing_report(field);
    // vertical and horizontal edge lines carry whole boundary segments
    CHECK(count_lines(report, RationalDirection{1, 0}) == 2);
    CHECK(count_lines(report, RationalDirection{0, 1}) == 2);
    bool saw_segment = false;
    for (const auto& line : report.lines) {
        if (line.direction == RationalDirection{1, 0} ||
            line.direction == RationalDirection{0, 1}) {
            CHECK(line.sided == Sidedness::one_sided);
            for (const auto& pt : line.touch_points) {
                CHECK_FALSE(pt.order.order.has_value());
                saw_segment |= pt.on_boundary_segment;
            }
        }
    }
    CHECK(saw_segment);
    CHECK_FALSE(report.all_orders_resolved);
}

TEST_CASE("rotated square: the glancing set is exactly the four vertices, order 1") {
    const DampingShape square = make_polygon_from_vertices(
        {{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}});
    const DampingShape rot = rotated_shape(square, 0.5235987755982988);
    const DampingField field(rot, 9.0);
    const GlancingReport report = glancing_report(field);

    CHECK_FALSE(report.g_empty);
    CHECK(report.all_orders_resolved);
    // collect distinct touch locations; all must be vertices of the polygon
    const auto& poly = std::get<PolygonShape>(rot.v);
    const auto vtx = poly.vertices();
    std::vector<TorusPoint> distinct;
    for (const auto& line : report.lines)
        for (const auto& pt : line.touch_points) {
            REQUIRE(pt.order.order.has_value());
            CHECK(*pt.order.order == doctest::Approx(1.0));
            CHECK(pt.order.method == "polygon-vertex");
            double dv = 1.0;
            for (const Vec2& v : vtx)
                dv = std::min(dv, torus_distance(pt.location, TorusPoint{v}));
            CHECK(dv < 1e-6);
            bool seen = false;
            for (const auto& q : distinct)
                if (torus_distance(q, pt.location) < 1e-6) seen = true;
            if (!seen) distinct.push_back(pt.location);
        }
    CHECK(distinct.size() == 4);
}

TEST_CASE("superellipse: axis tangencies have analytic orders m and n") {
    const DampingField field(make_superellipse(kCenter, 0.3, 0.3, 4.0, 2.0), 9.0);
    // direction (0,1): vertical tangent lines at x = 0.5 +- 0.3, order n = 2
    const auto v_lines = find_glancing_lines(field.shape(), RationalDirection{0, 1});
    REQUIRE(v_lines.size() == 2);
    for (auto line : v_lines) {
        auto pts = find_glancing_points(field.shape(), line);
        REQUIRE(pts.size() == 1);
        const auto est = estimate_order(field, pts[0], 0.3);
        REQUIRE(est.order.has_value());
        CHECK(*est.order == doctest::Approx(2.0));
    }
    // direction (1,0): horizontal tangents at y = 0.5 +- 0.3, order m = 4
    const auto h_lines = find_glancing_lines(field.shape(), RationalDirection{1, 0});
    REQUIRE(h_lines.size() == 2);
    for (auto line : h_lines) {
        auto pts = find_glancing_points(field.shape(), line);
        REQUIRE(pts.size() == 1);
        const auto est = estimate_order(field, pts[0], 0.3);
        REQUIRE(est.order.has_value());
        CHECK(*est.order == doctest::Approx(4.0));
        CHECK(est.method == "superellipse-axis");
    }
}

TEST_CASE("gcc fixture: every candidate geodesic is damped") {
    std::vector<DampingShape> parts;
    parts.push_back(make_strip(RationalDirection{1, 0}, 0.1, 0.45));
    parts.push_back(make_strip(RationalDirection{0, 1}, 0.55, 0.9));
    const DampingField field(make_union(std::move(parts)), 9.0);
    const GlancingReport report = glancing_report(field);
    CHECK(report.g_empty);
    CHECK(report.l1_empty);
    CHECK(report.l2_empty);
}

TEST_CASE("complement of a single geodesic: one two-sided line") {
    const DampingField field(make_strip(RationalDirection{1, 0}, 0.0, 1.0), 10.0);
    const GlancingReport report = glancing_report(field);
    REQUIRE(report.lines.size() == 1);
    CHECK(report.lines[0].sided == Sidedness::two_sided);
    CHECK(report.l1_empty);
    CHECK_FALSE(report.l2_empty);
    CHECK_FALSE(report.all_orders_resolved);  // boundary-parallel points
}

TEST_CASE("translation invariance of the report structure") {
    const DampingField base(make_disk(kCenter, kDiskR), 9.0);
    const DampingField moved(translated_shape(base.shape(), {0.31, 0.17}), 9.0);
    const GlancingReport r1 = glancing_report(base);
    const GlancingReport r2 = glancing_report(moved);
    CHECK(r1.candidate_directions.size() == r2.candidate_directions.size());
    CHECK(r1.lines.size() == r2.lines.size());
    auto count_sided = [](const GlancingReport& r, Sidedness s) {
        int n = 0;
        for (const auto& line : r.lines) n += line.sided == s ? 1 : 0;
        return n;
    };
    CHECK(count_sided(r1, Sidedness::one_sided) == count_sided(r2, Sidedness::one_sided));
    CHECK(count_sided(r1, Sidedness::two_sided) == count_sided(r2, Sidedness::two_sided));
}

TEST_CASE("chart order fit recovers cusp exponents for both chart directions") {
    // Region 0.5*sqrt(x) < y < 2*sqrt(x): order 1/2 against the horizontal
    // direction and 2 against the vertical one, depending on which
    // coordinate runs along the line.
    std::vector<Vec2> horizontal_chart;  // x = transverse (phys y), y = along (phys x)
    std::vector<Vec2> vertical_chart;    // x = transverse (phys x), y = along (phys y)
    const double R = 0.1;
    for (int k = 0; k < 60; ++k) {
        const double xp = R * std::pow(0.5, 0.25 * k);  // phys x along the cusp
        for (double cc : {0.5, 2.0}) {
            const double yp = cc * std::sqrt(xp);
            horizontal_chart.push_back({yp, xp});
            vertical_chart.push_back({xp, yp});
        }
    }
    const ChartOrderFit horizontal = dyadic_order_fit(horizontal_chart, R);
    REQUIRE(horizontal.order.has_value());
    CHECK(*horizontal.order == doctest::Approx(0.5).epsilon(0.05));

    const ChartOrderFit vertical = dyadic_order_fit(vertical_chart, std::sqrt(R) * 2.0);
    REQUIRE(vertical.order.has_value());
    CHECK(*vertical.order == doctest::Approx(2.0).epsilon(0.05));

    // boundary samples hugging {x = 0} are flagged, not fitted
    std::vector<Vec2> parallel;
    for (int k = 0; k < 40; ++k) parallel.push_back({0.0, R * std::pow(0.5, 0.2 * k)});
    const ChartOrderFit flat = dyadic_order_fit(parallel, R);
    CHECK_FALSE(flat.order.has_value());
    CHECK(flat.boundary_parallel);
}

TEST_CASE("forced dyadic fit cross-checks the analytic orders") {
    GlancingOptions opt;
    opt.force_dyadic_fit = true;

    SUBCASE("disk tangency fits ~2") {
        const DampingField field(make_disk(kCenter, kDiskR), 9.0);
        auto lines = find_glancing_lines(field.shape(), RationalDirection{1, 0});
        REQUIRE(lines.size() == 2);
        auto pts = find_glancing_points(field.shape(), lines[0]);
        REQUIRE(pts.size() == 1);
        GlancingOptions wide = opt;
        wide.chart_radius_override = 0.05;
        const auto est = estimate_order(field, pts[0], 0.3, wide);
        REQUIRE(est.order.has_value());
        CHECK(*est.order == doctest::Approx(2.0).epsilon(0.05));
    }
    SUBCASE("superellipse axis point fits ~4") {
        const DampingField field(make_superellipse(kCenter, 0.3, 0.3, 4.0, 4.0), 2.0);
        auto lines = find_glancing_lines(field.shape(), RationalDirection{1, 0});
        REQUIRE(lines.size() == 2);
        auto pts = find_glancing_points(field.shape(), lines[0]);
        REQUIRE(pts.size() == 1);
        GlancingOptions wide = opt;
        wide.chart_radius_override = 0.1;
        const auto est = estimate_order(field, pts[0], 0.3, wide);
        REQUIRE(est.order.has_value());
        CHECK(*est.order == doctest::Approx(4.0).epsilon(0.08));
    }
}

TEST_CASE("report renders to JSON and a table") {
    const DampingField field(make_disk(kCenter, kDiskR), 9.0);
    const GlancingReport report = glancing_report(field);
    const auto j = report_to_json(report);
    CHECK(j.at("schema") == "glance.report/1");
    CHECK(j.at("lines").size() == 6);
    CHECK(report_table(report).find("one-sided") != std::string::npos);
}
