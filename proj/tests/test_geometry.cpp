#include "doctest.h"
#include "polyerg/geometry.hpp"

using namespace polyerg;

namespace {
Polygon unit_square() { return build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }
}

TEST_CASE("square is normalized to perimeter 1 with CCW sides") {
    Polygon p = unit_square();
    REQUIRE(p.num_sides() == 4);
    for (int i = 0; i < 4; ++i) CHECK(p.sides[i].length == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(p.side_breaks[0] == 0.0);
    CHECK(p.side_breaks[4] == 1.0);
    // inward normals point toward the centroid
    Vec2 c{0.25 / 2, 0.25 / 2};  // scaled centroid is (0.125, 0.125)
    for (int i = 0; i < 4; ++i) {
        Vec2 mid = p.vertices[i] + p.sides[i].tangent * (p.sides[i].length / 2);
        CHECK(p.sides[i].normal.dot(c - mid) > 0);
    }
}

TEST_CASE("input order does not matter and hashes agree") {
    Polygon a = build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    Polygon b = build_polygon({{1, 1}, {0, 0}, {0, 1}, {1, 0}});
    CHECK(a.content_hash() == b.content_hash());
    Polygon c = build_polygon({{0, 0}, {1, 0}, {1, 2}, {0, 2}});
    CHECK(a.content_hash() != c.content_hash());
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 0}}), TooFewVertices);
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), DegenerateEdge);
    // interior point makes the input non-hull
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}), NonConvex);
    // collinear point is dropped by the hull, so the input is not strictly convex
    CHECK_THROWS_AS(build_polygon({{0, 0}, {0.5, 0.0}, {1, 0}, {1, 1}, {0, 1}}), NonConvex);
}

TEST_CASE("angles and vertex classes") {
    Polygon tri = build_polygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}});
    for (int i = 0; i < 3; ++i) {
        CHECK(tri.angles[i] == doctest::Approx(M_PI / 3).epsilon(1e-12));
        CHECK(tri.vertex_class[i] == VertexClass::Acute);
    }
    Polygon sq = unit_square();
    for (int i = 0; i < 4; ++i) CHECK(sq.vertex_class[i] == VertexClass::Right);
}

TEST_CASE("side lookup and boundary points") {
    Polygon p = unit_square();
    CHECK(p.side_of(0.1) == 0);
    CHECK(p.side_of(0.3) == 1);
    CHECK(p.side_of(0.99) == 3);
    auto bp = p.point_at(0.125);
    CHECK(bp.side == 0);
    CHECK(bp.point.x == doctest::Approx(0.125));
    CHECK(bp.point.y == doctest::Approx(0.0));
    CHECK_THROWS_AS(p.point_at(0.25), VertexHitError);
    CHECK(p.vertex_distance(0.2) == doctest::Approx(0.05));
    CHECK(p.vertex_distance(0.26) == doctest::Approx(0.01));
}

TEST_CASE("wrap and circular distance") {
    CHECK(wrap01(1.25) == doctest::Approx(0.25));
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(1.0) == 0.0);
    CHECK(circ_dist(0.95, 0.05) == doctest::Approx(0.1));
}

TEST_CASE("ray casting finds the first boundary hit") {
    Polygon p = unit_square();
    // mid-bottom, straight up (original frame scaled by 1/4)
    RayHit hit = first_boundary_hit(p, {0.125, 0.0}, {0.0, 1.0}, 0);
    CHECK(hit.side == 2);
    CHECK(hit.t == doctest::Approx(0.25));
    CHECK(hit.y == doctest::Approx(0.125));
}
