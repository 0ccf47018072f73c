#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "polyerg/errors.hpp"

namespace polyerg {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {x * c, y * c}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    Vec2 perp() const { return {-y, x}; }  // +90 degree rotation
};

enum class VertexClass { Acute, Right, Obtuse };

struct Side {
    Vec2 tangent;  // unit, along CCW orientation
    Vec2 normal;   // unit, points into the polygon interior
    double length = 0.0;
};

/// Convex polygon, CCW, perimeter normalized to 1. Arclength s in [0,1)
/// runs along the boundary starting at vertices[0].
class Polygon {
public:
    std::vector<Vec2> vertices;
    std::vector<double> side_breaks;  // s_0 = 0 < s_1 < ... < s_d = 1
    std::vector<Side> sides;
    std::vector<double> angles;  // interior angle per vertex (radians)
    std::vector<VertexClass> vertex_class;

    int num_sides() const { return static_cast<int>(vertices.size()); }

    /// Side index containing arclength s (s wrapped into [0,1)).
    int side_of(double s) const;

    /// Planar point at arclength s, plus side data. Throws VertexHitError
    /// if s is within eps_vertex of a vertex break.
    struct BoundaryPoint {
        Vec2 point;
        int side = 0;
        Vec2 tangent;
        Vec2 normal;
    };
    BoundaryPoint point_at(double s, double eps_vertex = kDefaultEpsVertex) const;

    /// Circular distance from s to the nearest vertex break.
    double vertex_distance(double s) const;

    /// FNV-1a hash of the normalized vertex coordinates.
    std::string content_hash() const;

    static constexpr double kDefaultEpsVertex = 1e-9;
    static constexpr double kRightAngleTol = 1e-9;
};

/// Phase point on M = [0,1) x [-pi/2, pi/2]. theta is measured from the
/// inward normal, positive toward the positive tangent direction.
struct PhasePoint {
    double s = 0.0;
    double theta = 0.0;
};

/// Builds a perimeter-normalized CCW polygon from >= 3 points in any order.
/// Throws NonConvex, DegenerateEdge, TooFewVertices.
Polygon build_polygon(const std::vector<Vec2>& points);

/// First boundary intersection of the ray p + t*dir (t > 0), ignoring side
/// skip_side. side = -1 when nothing is hit. y is the offset along the
/// target side tangent from its first vertex.
struct RayHit {
    int side = -1;
    double t = 0.0;
    double y = 0.0;
};
RayHit first_boundary_hit(const Polygon& poly, Vec2 p, Vec2 dir, int skip_side);

std::vector<VertexClass> classify_vertices(const Polygon& p);

inline double wrap01(double s) {
    s = s - std::floor(s);
    return (s >= 1.0) ? 0.0 : s;
}

/// Circular distance on [0,1).
inline double circ_dist(double a, double b) {
    double d = std::fabs(wrap01(a) - wrap01(b));
    return std::min(d, 1.0 - d);
}

}  // namespace polyerg
