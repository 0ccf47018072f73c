#include "polyerg/geometry.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace polyerg {

namespace {

// Andrew monotone chain, CCW hull. Collinear points are not kept.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    const int n = static_cast<int>(pts.size());
    std::vector<Vec2> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
        while (k >= 2 && (h[k - 1] - h[k - 2]).cross(pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (int i = n - 2, lo = k + 1; i >= 0; --i) {
        while (k >= lo && (h[k - 1] - h[k - 2]).cross(pts[i] - h[k - 2]) <= 0) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

}  // namespace

Polygon build_polygon(const std::vector<Vec2>& points) {
    if (points.size() < 3) throw TooFewVertices();
    for (size_t i = 0; i < points.size(); ++i)
        for (size_t j = i + 1; j < points.size(); ++j)
            if ((points[i] - points[j]).norm() == 0.0) throw DegenerateEdge("duplicate input point");

    std::vector<Vec2> hull = convex_hull(points);
    if (hull.size() != points.size())
        throw NonConvex("input points are not in strictly convex position");

    Polygon p;
    p.vertices = hull;
    const int d = p.num_sides();

    double perimeter = 0.0;
    for (int i = 0; i < d; ++i) {
        double len = (p.vertices[(i + 1) % d] - p.vertices[i]).norm();
        if (len <= 0.0) throw DegenerateEdge();
        perimeter += len;
    }
    for (auto& v : p.vertices) v = v * (1.0 / perimeter);

    p.sides.resize(d);
    p.side_breaks.assign(d + 1, 0.0);
    for (int i = 0; i < d; ++i) {
        Vec2 e = p.vertices[(i + 1) % d] - p.vertices[i];
        double len = e.norm();
        p.sides[i].length = len;
        p.sides[i].tangent = e * (1.0 / len);
        p.sides[i].normal = p.sides[i].tangent.perp();  // interior is on the left for CCW
        p.side_breaks[i + 1] = p.side_breaks[i] + len;
    }
    p.side_breaks[d] = 1.0;

    p.angles.resize(d);
    p.vertex_class.resize(d);
    for (int i = 0; i < d; ++i) {
        Vec2 uin = p.sides[(i + d - 1) % d].tangent;
        Vec2 uout = p.sides[i].tangent;
        double turn = std::atan2(uin.cross(uout), uin.dot(uout));
        if (turn <= 0.0) throw NonConvex();
        p.angles[i] = M_PI - turn;
    }
    p.vertex_class = classify_vertices(p);
    return p;
}

RayHit first_boundary_hit(const Polygon& poly, Vec2 p, Vec2 dir, int skip_side) {
    RayHit best;
    double best_t = std::numeric_limits<double>::infinity();
    const int d = poly.num_sides();
    for (int j = 0; j < d; ++j) {
        if (j == skip_side) continue;
        Vec2 w = poly.vertices[j] - p;
        double den = dir.cross(poly.sides[j].tangent);
        if (std::fabs(den) < 1e-15) continue;  // ray parallel to side
        double t = w.cross(poly.sides[j].tangent) / den;
        double y = w.cross(dir) / den;
        if (t <= 1e-12) continue;
        if (y < -1e-9 || y > poly.sides[j].length + 1e-9) continue;
        if (t < best_t) {
            best_t = t;
            best = {j, t, y};
        }
    }
    return best;
}

std::vector<VertexClass> classify_vertices(const Polygon& p) {
    std::vector<VertexClass> out(p.angles.size());
    for (size_t i = 0; i < p.angles.size(); ++i) {
        double a = p.angles[i];
        if (std::fabs(a - M_PI / 2) < Polygon::kRightAngleTol)
            out[i] = VertexClass::Right;
        else if (a < M_PI / 2)
            out[i] = VertexClass::Acute;
        else
            out[i] = VertexClass::Obtuse;
    }
    return out;
}

int Polygon::side_of(double s) const {
    s = wrap01(s);
    auto it = std::upper_bound(side_breaks.begin(), side_breaks.end(), s);
    int i = static_cast<int>(it - side_breaks.begin()) - 1;
    if (i < 0) i = 0;
    if (i >= num_sides()) i = num_sides() - 1;
    return i;
}

double Polygon::vertex_distance(double s) const {
    s = wrap01(s);
    int i = side_of(s);
    return std::min(s - side_breaks[i], side_breaks[i + 1] - s);
}

Polygon::BoundaryPoint Polygon::point_at(double s, double eps_vertex) const {
    s = wrap01(s);
    if (vertex_distance(s) < eps_vertex) throw VertexHitError("arclength at a vertex");
    int i = side_of(s);
    BoundaryPoint bp;
    bp.side = i;
    bp.tangent = sides[i].tangent;
    bp.normal = sides[i].normal;
    bp.point = vertices[i] + sides[i].tangent * (s - side_breaks[i]);
    return bp;
}

std::string Polygon::content_hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](double v) {
        // round to 1e-12 so that equal-up-to-noise inputs hash alike
        int64_t q = static_cast<int64_t>(std::llround(v * 1e12));
        for (int b = 0; b < 8; ++b) {
            h ^= static_cast<uint64_t>((q >> (8 * b)) & 0xff);
            h *= 1099511628211ull;
        }
    };
    for (const auto& v : vertices) {
        mix(v.x);
        mix(v.y);
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace polyerg
