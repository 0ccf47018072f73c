#pragma once

#include "polyerg/pwmap.hpp"

namespace polyerg {

/// Regular d-gon inscribed in the unit circle before normalization;
/// vertex 0 at angle -pi/2 + pi/d so that side 0 starts the arclength chart.
Polygon regular_polygon(int d);

/// Skew-product model of the slap map of the regular d-gon (d odd):
/// per-side chart x = (s - s_k) * d, base map
///   phi_d(x) = -(x - 1/2) / cos(pi/d)  (mod 1),
/// side shift +/- floor(d/2) depending on x <> 1/2.
struct SkewProduct {
    int d = 0;
    int shift = 0;              // floor(d/2)
    PiecewiseAffineMap base;    // phi_d
};
SkewProduct skew_product(int d);

/// Max defect of the conjugacy between slap_map(regular_polygon(d)) and the
/// skew product over a deterministic sample of chart points.
double conjugacy_check(int d, int samples = 4096);

/// Triangle with angles a at (0,0) and b at (1,0); the third angle is
/// pi - a - b. Normalized like every polygon.
Polygon triangle_from_angles(double a, double b);

/// Kite with vertices (0,0), (w,-h), (L,0), (w,h). Throws NonConvex for bad
/// parameters.
Polygon kite(double w, double h, double L);

/// Kite instance with at least two slap acips, frozen from a parameter scan.
Polygon fixture_kite();

/// Expanding circle map of a chamber floor:
///   phi_alpha(x) = 2/(1 - cos alpha) * (x - 1/2)  (mod 1),
/// defined for alpha in [pi/2, pi).
PiecewiseAffineMap floor_map(double alpha);

/// Predicted number of mixing components is 2^m.
int m_of_alpha(double alpha);  // floor(-log2(1 - log2(1 - cos alpha)))
int m_of_d(int d);             // floor(-log2(-log2 cos(pi/d)))

/// One chamber: cyclic pentagon (t, u, q, p, v) on the unit circle with top
/// direction tau and ceiling angle alpha at the top vertex; beta = pi-alpha.
/// The two arcs carry the chamber's boundary trace.
struct Chamber {
    double alpha = 0.0;
    double tau = 0.0;   // direction of the top vertex
    double beta = 0.0;  // pi - alpha
    Polygon pentagon;   // the standalone chamber polygon
    std::vector<Vec2> triangle;  // enclosing isosceles triangle, CCW
    // arcs on the unit circle occupied by the chamber, as angle intervals
    std::array<std::array<double, 2>, 2> arcs;  // top arc, floor arc
};
Chamber chamber(double alpha, double tau = M_PI / 2);

/// Polygon hosting m disjoint chambers: intersection of the chamber
/// triangles, a convex 3m-gon. lambda_arcs[i] are the two arclength
/// intervals of chamber i's trace on the boundary.
struct ChamberedPolygon {
    Polygon polygon;
    std::vector<Chamber> chambers;
    std::vector<std::array<Interval, 2>> lambda_arcs;
};

ChamberedPolygon separated_chambers(const std::vector<Chamber>& chambers);
ChamberedPolygon separated_chambers_default(int m);

/// n chambers placed greedily: each new top at the midpoint of the largest
/// free arc gap, alpha found by bisection so the arcs stay disjoint.
ChamberedPolygon chamber_tower(int n);

struct KiteScanResult {
    double w = 0.0, h = 0.0;
    int acips = 0;
};

/// Scans the kite family (w, h) for slap maps with >= min_acips acips at the
/// given Ulam resolution; returns all hits.
std::vector<KiteScanResult> kite_search(int grid, int n_bins, int min_acips);

}  // namespace polyerg
