#include "polyerg/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "polyerg/pwexp.hpp"
#include "polyerg/slapmap.hpp"

namespace polyerg {

Polygon regular_polygon(int d) {
    if (d < 3) throw InputError("regular polygon needs d >= 3");
    std::vector<Vec2> pts;
    for (int k = 0; k < d; ++k) {
        double a = M_PI / 2 + 2 * M_PI * k / d;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    return build_polygon(pts);
}

SkewProduct skew_product(int d) {
    if (d < 3 || d % 2 == 0) throw InputError("skew product model needs odd d >= 3");
    SkewProduct sp;
    sp.d = d;
    sp.shift = d / 2;
    double sig = 1.0 / std::cos(M_PI / d);
    PiecewiseAffineMap& m = sp.base;
    m.circle = true;
    m.branches.push_back({0.0, 0.5, -sig, sig / 2, -1});
    m.branches.push_back({0.5, 1.0, -sig, sig / 2 + 1.0, -1});
    m.finalize();
    return sp;
}

double conjugacy_check(int d, int samples) {
    Polygon poly = regular_polygon(d);
    PiecewiseAffineMap psi = slap_map(poly);
    SkewProduct sp = skew_product(d);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        double s = (i + 0.5) / samples;
        if (poly.vertex_distance(s) < 1e-9) continue;
        int k = poly.side_of(s);
        double x = (s - poly.side_breaks[k]) / poly.sides[k].length;
        if (std::fabs(x - 0.5) < 1e-9) continue;  // base-map discontinuity
        double y = sp.base.eval_right(x);
        int kp = ((k + (x < 0.5 ? -sp.shift : sp.shift)) % d + d) % d;
        double s_pred = poly.side_breaks[kp] + y * poly.sides[kp].length;
        double s_act = psi.eval_right(s);
        worst = std::max(worst, circ_dist(s_act, s_pred));
    }
    return worst;
}

Polygon triangle_from_angles(double a, double b) {
    if (a <= 0 || b <= 0 || a + b >= M_PI) throw InputError("bad triangle angles");
    double den = std::sin(a + b);
    Vec2 c{std::cos(a) * std::sin(b) / den, std::sin(a) * std::sin(b) / den};
    return build_polygon({{0, 0}, {1, 0}, c});
}

Polygon kite(double w, double h, double L) {
    return build_polygon({{0, 0}, {w, -h}, {L, 0}, {w, h}});
}

Polygon fixture_kite() {
    // parameters found by kite_search: two acips of mixing period 4 with
    // disjoint supports, stable across 2^13..2^15 bins; the hit region spans
    // roughly w in [0.22, 0.25], h in [0.16, 0.21] (and its mirror w -> 1-w)
    return kite(0.236, 0.1827, 1.0);
}

PiecewiseAffineMap floor_map(double alpha) {
    if (alpha < M_PI / 2 || alpha >= M_PI) throw AlphaOutOfRange();
    double sig = 2.0 / (1.0 - std::cos(alpha));
    PiecewiseAffineMap m;
    m.circle = true;
    m.branches.push_back({0.0, 0.5, sig, 1.0 - sig / 2, -1});
    m.branches.push_back({0.5, 1.0, sig, -sig / 2, -1});
    m.finalize();
    return m;
}

int m_of_alpha(double alpha) {
    if (alpha < M_PI / 2 || alpha >= M_PI) throw AlphaOutOfRange();
    double v = -std::log2(1.0 - std::log2(1.0 - std::cos(alpha)));
    return static_cast<int>(std::floor(v + 1e-9));
}

int m_of_d(int d) {
    if (d < 3 || d % 2 == 0) throw InputError("m(d) defined for odd d >= 3");
    double v = -std::log2(-std::log2(std::cos(M_PI / d)));
    return static_cast<int>(std::floor(v + 1e-9));
}

namespace {

Vec2 on_circle(double ang) { return {std::cos(ang), std::sin(ang)}; }

double wrap2pi(double a) {
    a = std::fmod(a, 2 * M_PI);
    return a < 0 ? a + 2 * M_PI : a;
}

// gap from arc [a1,b1] to arc [a2,b2] on the circle of angles (0 if overlap)
double arc_gap(double a1, double b1, double a2, double b2) {
    double g1 = wrap2pi(a2 - b1);
    double g2 = wrap2pi(a1 - b2);
    // disjoint arcs tile the circle: lengths plus gaps sum to exactly 2*pi;
    // any overlap pushes the sum above that
    double len1 = wrap2pi(b1 - a1), len2 = wrap2pi(b2 - a2);
    if (g1 + len1 + len2 + g2 > 2 * M_PI + 1e-9) return 0.0;
    return std::min(g1, g2);
}

}  // namespace

Chamber chamber(double alpha, double tau) {
    if (alpha <= M_PI / 2 || alpha >= M_PI)
        throw AlphaOutOfRange("chamber needs pi/2 < alpha < pi");
    Chamber c;
    c.alpha = alpha;
    c.tau = tau;
    c.beta = M_PI - alpha;
    double b = c.beta;
    Vec2 t = on_circle(tau);
    Vec2 u = on_circle(tau + b);
    Vec2 v = on_circle(tau - b);
    Vec2 q = on_circle(tau + M_PI - b);
    Vec2 p = on_circle(tau + M_PI + b);
    c.pentagon = build_polygon({t, u, q, p, v});

    // isosceles triangle: apex t, ceiling edges through u and v extended to
    // the floor line through q and p
    double x0 = std::sin(b) * (1 + std::cos(b)) / (1 - std::cos(b));
    double rot = tau - M_PI / 2;
    auto place = [&](Vec2 w) {
        double cs = std::cos(rot), sn = std::sin(rot);
        return Vec2{w.x * cs - w.y * sn, w.x * sn + w.y * cs};
    };
    c.triangle = {place({0, 1}), place({-x0, -std::cos(b)}), place({x0, -std::cos(b)})};

    c.arcs[0] = {wrap2pi(tau - b), wrap2pi(tau + b)};
    c.arcs[1] = {wrap2pi(tau + M_PI - b), wrap2pi(tau + M_PI + b)};
    return c;
}

namespace {

// Sutherland-Hodgman clip of a convex polygon by the half-plane left of a->b.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 a, Vec2 b) {
    std::vector<Vec2> out;
    Vec2 e = b - a;
    auto side = [&](Vec2 w) { return e.cross(w - a); };
    const int n = static_cast<int>(poly.size());
    for (int i = 0; i < n; ++i) {
        Vec2 cur = poly[i], nxt = poly[(i + 1) % n];
        double sc = side(cur), sn = side(nxt);
        if (sc >= -1e-15) out.push_back(cur);
        if ((sc > 1e-15 && sn < -1e-15) || (sc < -1e-15 && sn > 1e-15)) {
            double tpar = sc / (sc - sn);
            out.push_back(cur + (nxt - cur) * tpar);
        }
    }
    return out;
}

// arclength of a point on the boundary of a normalized polygon; the point is
// given in the original (pre-normalization) frame with scale factor `scale`.
double locate_on_boundary(const Polygon& poly, Vec2 pt, double scale) {
    Vec2 w = pt * scale;
    for (int i = 0; i < poly.num_sides(); ++i) {
        Vec2 rel = w - poly.vertices[i];
        double x = rel.dot(poly.sides[i].tangent);
        double off = std::fabs(rel.cross(poly.sides[i].tangent));
        if (off < 1e-9 && x > -1e-9 && x < poly.sides[i].length + 1e-9)
            return wrap01(poly.side_breaks[i] + std::clamp(x, 0.0, poly.sides[i].length));
    }
    throw InputError("chamber trace point is not on the polygon boundary");
}

}  // namespace

ChamberedPolygon separated_chambers(const std::vector<Chamber>& chambers) {
    if (chambers.empty()) throw InputError("need at least one chamber");
    // pairwise arc disjointness
    std::vector<std::array<double, 2>> arcs;
    for (const auto& c : chambers) {
        arcs.push_back(c.arcs[0]);
        arcs.push_back(c.arcs[1]);
    }
    for (size_t i = 0; i < arcs.size(); ++i)
        for (size_t j = i + 1; j < arcs.size(); ++j)
            if (arc_gap(arcs[i][0], arcs[i][1], arcs[j][0], arcs[j][1]) < 1e-9)
                throw NotSeparated("chamber arcs overlap or touch");

    std::vector<Vec2> region = {{-4, -4}, {4, -4}, {4, 4}, {-4, 4}};
    for (const auto& c : chambers) {
        for (int e = 0; e < 3; ++e) {
            region = clip_halfplane(region, c.triangle[e], c.triangle[(e + 1) % 3]);
            if (region.size() < 3) throw NotSeparated("chamber triangles have empty intersection");
        }
    }
    // drop collinear duplicates produced by clipping
    std::vector<Vec2> cleaned;
    const int nr = static_cast<int>(region.size());
    for (int i = 0; i < nr; ++i) {
        Vec2 prv = region[(i + nr - 1) % nr], cur = region[i], nxt = region[(i + 1) % nr];
        if ((cur - prv).cross(nxt - cur) > 1e-12) cleaned.push_back(cur);
    }

    ChamberedPolygon out;
    out.chambers = chambers;
    out.polygon = build_polygon(cleaned);
    if (out.polygon.num_sides() != 3 * static_cast<int>(chambers.size()))
        throw NotSeparated("chamber intersection is not a 3m-gon");

    double perim = 0.0;
    const int nc = static_cast<int>(cleaned.size());
    for (int i = 0; i < nc; ++i) perim += (cleaned[(i + 1) % nc] - cleaned[i]).norm();
    double scale = 1.0 / perim;

    for (const auto& c : chambers) {
        double b = c.beta;
        Vec2 t = on_circle(c.tau);
        Vec2 u = on_circle(c.tau + b);
        Vec2 v = on_circle(c.tau - b);
        Vec2 q = on_circle(c.tau + M_PI - b);
        Vec2 p = on_circle(c.tau + M_PI + b);
        double sv = locate_on_boundary(out.polygon, v, scale);
        double su = locate_on_boundary(out.polygon, u, scale);
        double sq = locate_on_boundary(out.polygon, q, scale);
        double sp2 = locate_on_boundary(out.polygon, p, scale);
        (void)locate_on_boundary(out.polygon, t, scale);
        Interval ceiling{sv, su < sv ? su + 1.0 : su};
        Interval floor_arc{sq, sp2 < sq ? sp2 + 1.0 : sp2};
        out.lambda_arcs.push_back({ceiling, floor_arc});
    }
    return out;
}

ChamberedPolygon separated_chambers_default(int m) {
    if (m < 1) throw InputError("need m >= 1 chambers");
    double step = M_PI / m;            // top directions; antipodes interleave
    double beta = 0.4 * step;          // leaves gaps of 0.2*step between arcs
    beta = std::min(beta, M_PI / 2 - 0.05);
    std::vector<Chamber> cs;
    for (int i = 0; i < m; ++i) cs.push_back(chamber(M_PI - beta, M_PI / 2 + i * step));
    return separated_chambers(cs);
}

ChamberedPolygon chamber_tower(int n) {
    if (n < 1) throw InputError("need n >= 1 chambers");
    std::vector<std::array<double, 2>> occupied;
    std::vector<Chamber> cs;
    const double clear_margin = 0.02;
    for (int i = 0; i < n; ++i) {
        double tau;
        if (occupied.empty()) {
            tau = M_PI / 2;
        } else {
            // midpoint of the largest free gap between occupied arcs
            std::vector<std::array<double, 2>> sorted = occupied;
            std::sort(sorted.begin(), sorted.end());
            double best_len = -1.0, best_mid = 0.0;
            for (size_t k = 0; k < sorted.size(); ++k) {
                double b1 = sorted[k][1];
                double a2 = sorted[(k + 1) % sorted.size()][0];
                double len = wrap2pi(a2 - b1);
                if (len > best_len) {
                    best_len = len;
                    best_mid = wrap2pi(b1 + len / 2);
                }
            }
            tau = best_mid;
        }
        // largest beta keeping both arcs clear of the occupied set, by
        // bisection on the clearance
        auto clearance = [&](double b) {
            double g = 2 * M_PI;
            std::array<std::array<double, 2>, 2> mine = {
                std::array<double, 2>{wrap2pi(tau - b), wrap2pi(tau + b)},
                std::array<double, 2>{wrap2pi(tau + M_PI - b), wrap2pi(tau + M_PI + b)}};
            for (const auto& a : mine)
                for (const auto& o : occupied)
                    g = std::min(g, arc_gap(a[0], a[1], o[0], o[1]));
            g = std::min(g, arc_gap(mine[0][0], mine[0][1], mine[1][0], mine[1][1]));
            return g;
        };
        // cap beta so that later chambers still fit: greedy midpoint
        // placement settles on centers spaced 2*pi / 2^ceil(log2(2n))
        int levels = 1;
        while (levels < 2 * n) levels *= 2;
        double lo = 1e-3, hi = std::min(M_PI / 2 - 0.05, 0.85 * M_PI / levels);
        if (clearance(hi) < clear_margin) {
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                if (clearance(mid) >= clear_margin)
                    lo = mid;
                else
                    hi = mid;
            }
        } else {
            lo = hi;
        }
        double beta = lo;
        if (clearance(beta) < clear_margin / 2)
            throw NotSeparated("no room left for another chamber");
        Chamber c = chamber(M_PI - beta, tau);
        occupied.push_back(c.arcs[0]);
        occupied.push_back(c.arcs[1]);
        cs.push_back(c);
    }
    return separated_chambers(cs);
}

std::vector<KiteScanResult> kite_search(int grid, int n_bins, int min_acips) {
    std::vector<KiteScanResult> hits;
    for (int iw = 1; iw < grid; ++iw) {
        for (int ih = 1; ih < grid; ++ih) {
            double w = 0.2 + 0.6 * iw / grid;
            double h = 0.1 + 0.6 * ih / grid;
            Polygon p;
            try {
                p = kite(w, h, 1.0);
            } catch (const PolyergError&) {
                continue;
            }
            try {
                PiecewiseAffineMap psi = slap_map(p);
                if (facing_parallel_sides(psi)) continue;
                ErgodicDecomposition dec = ergodic_decomposition(psi, n_bins);
                if (static_cast<int>(dec.acips.size()) >= min_acips)
                    hits.push_back({w, h, static_cast<int>(dec.acips.size())});
            } catch (const PolyergError&) {
                continue;
            }
        }
    }
    return hits;
}

}  // namespace polyerg
