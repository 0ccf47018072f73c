#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "polyerg/billiard.hpp"
#include "polyerg/corpus.hpp"
#include "polyerg/slapmap.hpp"

using namespace polyerg;

TEST_CASE("square specular bounce: angles reflect, chords measure") {
    Polygon sq = build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    auto out = billiard_step(sq, {0.125, 0.0});
    REQUIRE(out.ok());
    CHECK(out.next.s == doctest::Approx(0.625).epsilon(1e-12));
    CHECK(out.next.theta == doctest::Approx(0.0));
    CHECK(out.chord == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(out.side_from == 0);
    CHECK(out.side_to == 2);

    // dir = cos(pi/6) n + sin(pi/6) u hits the right side at height tan(pi/6)
    auto tilted = billiard_step(sq, {0.125, M_PI / 6});
    REQUIRE(tilted.ok());
    CHECK(tilted.side_to == 1);
    CHECK(tilted.theta_arrival == doctest::Approx(M_PI / 3).epsilon(1e-12));
}

TEST_CASE("degenerate launches are diagnosed, not computed") {
    Polygon sq = build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK(billiard_step(sq, {0.25, 0.0}).status == StepOutcome::Status::SourceAtVertex);
    CHECK(billiard_step(sq, {0.125, M_PI / 2 - 1e-8}).status == StepOutcome::Status::Tangency);
    // aim straight at the corner (1,1) from the bottom midpoint
    double theta = std::atan(0.5);
    CHECK(billiard_step(sq, {0.125, theta}).status == StepOutcome::Status::VertexHit);
}

TEST_CASE("slap law reproduces the slap map on the zero section") {
    for (int d : {5, 7}) {
        Polygon p = regular_polygon(d);
        PiecewiseAffineMap psi = slap_map(p);
        ReflectionLaw slap = ReflectionLaw::slap();
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        for (int k = 0; k < 200; ++k) {
            double s = uni(rng);
            if (p.vertex_distance(s) < 1e-6) continue;
            auto out = contracting_step(p, slap, {s, 0.0});
            REQUIRE(out.ok());
            CHECK(out.next.theta == 0.0);
            CHECK(circ_dist(out.next.s, psi.eval_right(s)) < 1e-11);
        }
    }
}

TEST_CASE("analytic derivative matches finite differences") {
    std::vector<Polygon> polys = {
        regular_polygon(3), regular_polygon(5), regular_polygon(7), fixture_kite(),
        build_polygon({{0, 0}, {1.3, 0.1}, {1.7, 0.9}, {0.6, 1.4}, {-0.2, 0.7}})};
    ReflectionLaw f = ReflectionLaw::linear(0.3);
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> us(0.0, 1.0);
    std::uniform_real_distribution<double> ut(-1.2, 1.2);
    for (const auto& p : polys) {
        int done = 0;
        while (done < 300) {
            PhasePoint x{us(rng), ut(rng)};
            Jacobian2 j;
            try {
                j = dphi(p, f, x);
            } catch (const SingularPoint&) {
                continue;
            }
            Jacobian2 fd;
            try {
                fd = oracles::fd_dphi(p, f, x);
            } catch (...) {
                continue;  // a probe point crossed the singular set
            }
            // the finite-difference stencil must not straddle a branch cut
            double scale = std::max({1.0, std::fabs(j.a11), std::fabs(j.a12)});
            if (std::fabs(fd.a11 - j.a11) > 0.05 * scale) continue;
            CHECK(j.a21 == 0.0);
            CHECK(std::fabs(fd.a11 - j.a11) < 1e-5 * scale);
            CHECK(std::fabs(fd.a12 - j.a12) < 1e-5 * scale);
            CHECK(std::fabs(fd.a21 - j.a21) < 1e-5);
            CHECK(std::fabs(fd.a22 - j.a22) < 1e-5);
            CHECK(j.a11 < 0.0);  // the derivative matrix is -[[+,+],[0,+]]
            ++done;
        }
    }
}

TEST_CASE("horizontal cones are preserved inside the strip") {
    Polygon p = regular_polygon(5);
    const double c = 0.2;
    for (double sigma : {0.1, 0.5}) {
        ReflectionLaw f = ReflectionLaw::linear(sigma);
        double band = (M_PI / 2) * sigma;
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> us(0.0, 1.0);
        std::uniform_real_distribution<double> ut(-band, band);
        std::uniform_real_distribution<double> uw(-c, c);
        int done = 0;
        while (done < 500) {
            PhasePoint x{us(rng), ut(rng)};
            Jacobian2 j;
            try {
                j = dphi(p, f, x);
            } catch (const SingularPoint&) {
                continue;
            }
            double w = uw(rng);
            double xi = j.a11 + j.a12 * w;
            double eta = j.a21 + j.a22 * w;
            CHECK(std::fabs(eta) <= c * std::fabs(xi));
            ++done;
        }
    }
}

TEST_CASE("orbits stop cleanly at the singular set") {
    Polygon sq = build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    ReflectionLaw spec = ReflectionLaw::specular();
    Orbit o = orbit(sq, spec, {0.125, std::atan(0.5)}, 10);
    CHECK(o.truncated);
    CHECK(o.points.size() == 1);

    Polygon p = regular_polygon(5);
    ReflectionLaw f = ReflectionLaw::linear(0.1);
    Orbit good = orbit(p, f, {0.13, 0.05}, 200);
    CHECK_FALSE(good.truncated);
    CHECK(good.points.size() == 201);
    for (const auto& z : good.points) CHECK(std::fabs(z.theta) <= (M_PI / 2) * 0.1 + 0.051);
}

TEST_CASE("first singular set of the pentagon slap billiard") {
    Polygon p = regular_polygon(5);
    ReflectionLaw f = ReflectionLaw::linear(0.02);
    SingularSet s = singular_set(p, f, 1, 256);
    REQUIRE(!s.curves.empty());
    CHECK(branching_number(s) == 2);
    for (const auto& curve : s.curves) {
        CHECK(curve.depth == 1);
        for (size_t k = 0; k + 1 < curve.points.size(); ++k)
            CHECK(curve.points[k].theta < curve.points[k + 1].theta);
        // each root's chord lands on a vertex
        for (size_t k = 0; k < curve.points.size(); k += 16) {
            const PhasePoint& z = curve.points[k];
            int i = p.side_of(z.s);
            Vec2 u = p.sides[i].tangent, n = p.sides[i].normal;
            Vec2 pos = p.vertices[i] + u * (z.s - p.side_breaks[i]);
            Vec2 dir = n * std::cos(z.theta) + u * std::sin(z.theta);
            RayHit hit = first_boundary_hit(p, pos, dir, i);
            REQUIRE(hit.side >= 0);
            double land = wrap01(p.side_breaks[hit.side] + hit.y);
            CHECK(p.vertex_distance(land) < 1e-6);
        }
    }
}

TEST_CASE("one-step expansion of the pentagon slap billiard is 1/cos(pi/5)") {
    Polygon p = regular_polygon(5);
    ExpansionEstimate e = expansion_rate(p, ReflectionLaw::slap(), 1, 512);
    CHECK(e.value == doctest::Approx(1.0 / std::cos(M_PI / 5)).epsilon(1e-6));
    CHECK(e.samples > 0);
}

TEST_CASE("hyperbolicity certificate for the equilateral triangle") {
    Polygon p = regular_polygon(3);
    ReflectionLaw f = ReflectionLaw::linear(0.05);
    Certificate cert = hyperbolicity_certificate(p, f, 4, 256);
    CHECK(cert.ok);
    CHECK(cert.connection_free);
    CHECK(cert.m >= 1);
    CHECK(cert.branching < cert.alpha);

    Polygon sq = build_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    CHECK_THROWS_AS(hyperbolicity_certificate(sq, f, 2, 64), FacingParallelSides);
}
