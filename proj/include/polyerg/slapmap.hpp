#pragma once

#include <optional>

#include "polyerg/pwmap.hpp"

namespace polyerg {

/// Exact slap map of a convex polygon: from arclength s, drop the inward
/// normal chord and land on the opposite boundary point. Piecewise affine
/// with branch slope -1/cos(beta), beta the angle between the source and
/// target side tangents.
PiecewiseAffineMap slap_map(const Polygon& p);

struct FixedVertexCheck {
    int vertex = 0;
    double defect = 0.0;  // max one-sided |limit - s_k|
    bool fixed = false;
};

/// Acute vertices are two-sided fixed points of the slap map.
std::vector<FixedVertexCheck> acute_vertices_fixed(const Polygon& p,
                                                   const PiecewiseAffineMap& psi,
                                                   double tol = 1e-10);

/// True when some branch has |slope| = 1 within tol, i.e. the polygon has a
/// pair of facing parallel sides and the slap map is not piecewise expanding.
bool facing_parallel_sides(const PiecewiseAffineMap& psi, double tol = 1e-10);

struct VertexConnection {
    int length = 0;                  // number of itinerary elements
    std::vector<double> itinerary;   // x_0 .. x_{n-1}, both ends at vertices
    int start_vertex = 0;
    int end_vertex = 0;
};

/// Shortest forward itinerary of the set-valued slap map joining two
/// vertices, at least one non-acute. Right vertices always produce one of
/// length 2.
std::optional<VertexConnection> orthogonal_vertex_connection(const Polygon& p,
                                                             const PiecewiseAffineMap& psi,
                                                             int max_len = 50,
                                                             double tol = 1e-9);

struct PreperiodicWitness {
    int vertex = 0;
    std::vector<double> path;  // orbit points up to the revisit
    int revisit_level = 0;
    double revisited_point = 0.0;
};

/// Searches set-valued orbits of non-acute vertices for a revisit within tol.
std::optional<PreperiodicWitness> preperiodic_vertex(const Polygon& p,
                                                     const PiecewiseAffineMap& psi,
                                                     int depth = 50,
                                                     double tol = 1e-9);

struct HatPdCheck {
    bool expanding = false;
    bool no_orthogonal_connection = false;
    bool no_preperiodic_vertex = false;
    bool ok() const { return expanding && no_orthogonal_connection && no_preperiodic_vertex; }
};

/// Membership test for the good polygon class: expanding slap map, no
/// orthogonal vertex connection, no preperiodic non-acute vertex (both
/// checked to finite depth).
HatPdCheck in_hat_Pd(const Polygon& p, int depth = 50, double tol = 1e-9);

}  // namespace polyerg
