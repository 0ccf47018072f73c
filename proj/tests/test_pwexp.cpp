#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "polyerg/corpus.hpp"
#include "polyerg/pwexp.hpp"
#include "polyerg/slapmap.hpp"

using namespace polyerg;

TEST_CASE("ulam rows of the doubling map are exact") {
    PiecewiseAffineMap dbl = floor_map(M_PI / 2);
    UlamModel u = build_ulam(dbl, 64);
    for (int i = 0; i < 64; ++i) {
        double sum = 0.0;
        for (auto& [j, p] : u.rows[i]) sum += p;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        REQUIRE(u.rows[i].size() == 2);  // bin i maps onto exactly two bins
        CHECK(u.rows[i][0].first == (2 * i) % 64);
        CHECK(u.rows[i][1].first == (2 * i + 1) % 64);
        CHECK(u.rows[i][0].second == doctest::Approx(0.5));
    }
}

TEST_CASE("ulam rows match a Monte Carlo pushforward") {
    Polygon p = regular_polygon(5);
    PiecewiseAffineMap psi = slap_map(p);
    const int n = 128;
    UlamModel u = build_ulam(psi, n);
    for (int bin : {3, 40, 77, 120}) {
        auto mc = oracles::mc_ulam_row(psi, n, bin, 200000, 99 + bin);
        std::vector<double> exact(n, 0.0);
        for (auto& [j, q] : u.rows[bin]) exact[j] = q;
        for (int j = 0; j < n; ++j) CHECK(std::fabs(exact[j] - mc[j]) < 5e-3);
    }
}

TEST_CASE("non-expanding maps are rejected unless overridden") {
    Polygon sq = build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    PiecewiseAffineMap psi = slap_map(sq);
    CHECK_THROWS_AS(build_ulam(psi, 64), NotExpanding);
    CHECK_NOTHROW(build_ulam(psi, 64, true));
}

TEST_CASE("doubling map: one mixing acip with uniform density") {
    PiecewiseAffineMap dbl = floor_map(M_PI / 2);
    ErgodicDecomposition dec = ergodic_decomposition(dbl, 1 << 12);
    REQUIRE(dec.acips.size() == 1);
    const Acip& a = dec.acips[0];
    CHECK(a.mixing_period == 1);
    CHECK(a.mass == doctest::Approx(1.0).epsilon(1e-10));
    REQUIRE(a.support.size() == 1);
    CHECK(a.support[0].length() == doctest::Approx(1.0).epsilon(1e-9));
    for (int b = 0; b < dec.n_bins; ++b) CHECK(std::fabs(a.density[b] - 1.0) < 1e-3);

    UlamModel u = build_ulam(dbl, dec.n_bins);
    std::vector<double> mass(dec.n_bins);
    for (int b = 0; b < dec.n_bins; ++b) mass[b] = a.density[b] / dec.n_bins;
    CHECK(pushforward_residual(u, mass) < 1e-9);
}

TEST_CASE("floor map at 2pi/3 has one acip with two cyclic components") {
    PiecewiseAffineMap m = floor_map(2 * M_PI / 3);
    CHECK(m_of_alpha(2 * M_PI / 3) == 1);
    ErgodicDecomposition dec = ergodic_decomposition(m, 1 << 12);
    REQUIRE(dec.acips.size() == 1);
    CHECK(dec.acips[0].mixing_period == 2);
    CHECK(dec.acips[0].components.size() == 2);
}

TEST_CASE("exact periodic points of the doubling map") {
    PiecewiseAffineMap dbl = floor_map(M_PI / 2);
    auto pts = periodic_points(dbl, 4);
    // cycles up to period 4: {0}, {1/3,2/3}, two 3-cycles, three 4-cycles
    CHECK(pts.size() == 7);
    int count_by_period[5] = {0, 0, 0, 0, 0};
    bool has_third = false, has_fifth = false;
    for (const auto& c : pts) {
        REQUIRE(c.period >= 1);
        REQUIRE(c.period <= 4);
        ++count_by_period[c.period];
        CHECK(c.multiplier == doctest::Approx(std::pow(2.0, c.period)).epsilon(1e-9));
        if (circ_dist(c.x, 1.0 / 3) < 1e-9) has_third = true;
        if (circ_dist(c.x, 1.0 / 5) < 1e-9) has_fifth = true;
        // verify the cycle closes under the map itself
        double x = c.x;
        for (int k = 0; k < c.period; ++k) x = dbl.eval_right(x);
        CHECK(circ_dist(x, c.x) < 1e-9);
    }
    CHECK(count_by_period[1] == 1);
    CHECK(count_by_period[2] == 1);
    CHECK(count_by_period[3] == 2);
    CHECK(count_by_period[4] == 3);
    CHECK(has_third);
    CHECK(has_fifth);
}

TEST_CASE("periodic points populate every sizable support interval") {
    PiecewiseAffineMap dbl = floor_map(M_PI / 2);
    ErgodicDecomposition dec = ergodic_decomposition(dbl, 1 << 10);
    auto pts = periodic_points(dbl, 6);
    auto gaps = density_of_periodic_points(dec, pts, 0.02);
    CHECK(gaps.empty());
}

TEST_CASE("pentagon slap: periodic points respect the word budget") {
    Polygon p = regular_polygon(5);
    PiecewiseAffineMap psi = slap_map(p);
    auto pts = periodic_points(psi, 6);
    CHECK(!pts.empty());
    for (const auto& c : pts) {
        CHECK(std::fabs(c.multiplier) > 1.0);
        double x = c.x;
        for (int k = 0; k < c.period; ++k) x = psi.eval_right(x);
        CHECK(circ_dist(x, c.x) < 1e-8);
    }
    CHECK_THROWS_AS(periodic_points(psi, 12, 100), WordExplosion);
}

TEST_CASE("support stability holds for the pentagon slap map") {
    Polygon p = regular_polygon(5);
    PiecewiseAffineMap psi = slap_map(p);
    CHECK_NOTHROW(check_support_stability(psi, 1 << 11));
}

TEST_CASE("boundary segments: full support has no boundary to resolve") {
    PiecewiseAffineMap dbl = floor_map(M_PI / 2);
    ErgodicDecomposition dec = ergodic_decomposition(dbl, 1 << 10);
    auto bs = boundary_segments(dbl, dec.acips[0], 3.0 / (1 << 10));
    CHECK(bs.segments.empty());
    CHECK(bs.endpoint.empty());
}

TEST_CASE("boundary segments assign orders on a gapped support") {
    PiecewiseAffineMap m = floor_map(2.6);  // sigma ~ 1.167, gapped support
    ErgodicDecomposition dec = ergodic_decomposition(m, 1 << 12);
    REQUIRE(!dec.acips.empty());
    const Acip& a = dec.acips[0];
    if (!a.support.empty() && a.support.size() > 1) {
        auto bs = boundary_segments(m, a, 8.0 / (1 << 12));
        CHECK(bs.endpoint.size() == 2 * a.support.size());
        for (int k : bs.order) CHECK(k >= 0);
    }
}
