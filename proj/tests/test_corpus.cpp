#include "doctest.h"
#include "polyerg/corpus.hpp"
#include "polyerg/pwexp.hpp"
#include "polyerg/slapmap.hpp"

using namespace polyerg;

TEST_CASE("mixing exponent tables") {
    CHECK(m_of_d(3) == 0);
    CHECK(m_of_d(5) == 1);
    CHECK(m_of_d(7) == 2);
    CHECK(m_of_d(9) == 3);
    CHECK(m_of_alpha(M_PI / 2) == 0);
    CHECK(m_of_alpha(2 * M_PI / 3) == 1);
    CHECK(m_of_alpha(5 * M_PI / 6) == 3);
}

TEST_CASE("regular polygons: side lengths, angles, symmetry") {
    for (int d : {3, 4, 5, 7, 9}) {
        Polygon p = regular_polygon(d);
        REQUIRE(p.num_sides() == d);
        for (int i = 0; i < d; ++i) {
            CHECK(p.sides[i].length == doctest::Approx(1.0 / d).epsilon(1e-12));
            CHECK(p.angles[i] == doctest::Approx(M_PI * (d - 2) / d).epsilon(1e-10));
        }
    }
}

TEST_CASE("skew product base map of the equilateral triangle") {
    SkewProduct sp = skew_product(3);
    CHECK(sp.shift == 1);
    REQUIRE(sp.base.branches.size() >= 2);
    for (const auto& br : sp.base.branches)
        CHECK(br.slope == doctest::Approx(-2.0).epsilon(1e-14));  // -1/cos(pi/3)
    CHECK(sp.base.eval_right(0.25) == doctest::Approx(wrap01(-2 * (0.25 - 0.5))));
}

TEST_CASE("slap maps of odd regular polygons are conjugate to the skew product") {
    for (int d = 3; d <= 15; d += 2) CHECK(conjugacy_check(d) < 1e-10);
}

TEST_CASE("floor map at alpha = pi/2 is the doubling map") {
    PiecewiseAffineMap m = floor_map(M_PI / 2);
    CHECK(m.eval_right(0.1) == doctest::Approx(wrap01(2 * (0.1 - 0.5))).epsilon(1e-12));
    CHECK(m.eval_right(0.8) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(m.min_abs_slope() == doctest::Approx(2.0));
    CHECK_THROWS_AS(floor_map(0.3), AlphaOutOfRange);
    CHECK_THROWS_AS(floor_map(3.2), AlphaOutOfRange);
}

TEST_CASE("triangle from angles places the right angle where asked") {
    Polygon t = triangle_from_angles(M_PI / 2, M_PI / 6);
    REQUIRE(t.num_sides() == 3);
    bool has_right = false;
    for (int i = 0; i < 3; ++i) has_right |= t.vertex_class[i] == VertexClass::Right;
    CHECK(has_right);
    double sum = t.angles[0] + t.angles[1] + t.angles[2];
    CHECK(sum == doctest::Approx(M_PI).epsilon(1e-10));
}

TEST_CASE("kite family: valid and degenerate parameters") {
    Polygon k = fixture_kite();
    CHECK(k.num_sides() == 4);
    CHECK_FALSE(facing_parallel_sides(slap_map(k)));
    CHECK_THROWS_AS(kite(1.5, 0.3, 1.0), NonConvex);  // apex past the tip
}

TEST_CASE("single chamber geometry") {
    Chamber c = chamber(2 * M_PI / 3);
    CHECK(c.beta == doctest::Approx(M_PI / 3));
    REQUIRE(c.pentagon.num_sides() == 5);
    REQUIRE(c.triangle.size() == 3);
    // every chamber vertex sits on the unit circle before normalization
    // (the pentagon itself is re-normalized, so check the triangle arms
    // instead: the ceiling meets the arms at right angles at the top vertex)
    Vec2 t{std::cos(c.tau), std::sin(c.tau)};
    Vec2 u{std::cos(c.tau + c.beta), std::sin(c.tau + c.beta)};
    Vec2 v{std::cos(c.tau - c.beta), std::sin(c.tau - c.beta)};
    Vec2 a = u - t, b = v - t;
    double ang = std::acos(a.dot(b) / (a.norm() * b.norm()));
    CHECK(ang == doctest::Approx(c.alpha).epsilon(1e-10));
    // arcs stay within one full turn
    for (const auto& arc : c.arcs) CHECK(arc[1] > arc[0]);
}

TEST_CASE("separated chambers build a 3m-gon with disjoint traces") {
    for (int m : {2, 3}) {
        ChamberedPolygon cp = separated_chambers_default(m);
        CHECK(cp.polygon.num_sides() == 3 * m);
        REQUIRE(static_cast<int>(cp.lambda_arcs.size()) == m);
        // traces are pairwise disjoint on the boundary circle
        std::vector<Interval> all;
        for (const auto& pair : cp.lambda_arcs)
            for (const auto& iv : pair) all.push_back(iv);
        for (size_t a = 0; a < all.size(); ++a)
            for (size_t b = a + 1; b < all.size(); ++b) {
                bool overlap = false;
                for (int shift = -1; shift <= 1; ++shift) {
                    double lo = std::max(all[a].a, all[b].a + shift);
                    double hi = std::min(all[a].b, all[b].b + shift);
                    overlap |= hi - lo > 1e-12;
                }
                CHECK_FALSE(overlap);
            }
    }
}

TEST_CASE("chamber tower of six") {
    ChamberedPolygon cp = chamber_tower(6);
    CHECK(cp.polygon.num_sides() == 18);
    CHECK(cp.chambers.size() == 6);
    PiecewiseAffineMap psi = slap_map(cp.polygon);
    CHECK(psi.min_abs_slope() > 1.0 + 1e-4);
}

TEST_CASE("colliding chambers are rejected") {
    std::vector<Chamber> cs = {chamber(2.8, M_PI / 2), chamber(2.8, M_PI / 2 + 0.05)};
    CHECK_THROWS_AS(separated_chambers(cs), NotSeparated);
    CHECK_THROWS_AS(chamber(0.5), AlphaOutOfRange);
}
