#pragma once

#include <optional>

#include "polyerg/pwmap.hpp"

namespace polyerg {

/// Row-stochastic Ulam discretization of a piecewise affine map, assembled
/// exactly from branch/bin interval arithmetic (no sampling).
struct UlamModel {
    int n_bins = 0;
    std::vector<std::vector<std::pair<int, double>>> rows;  // rows[i] = {(j, P_ij)}
};

UlamModel build_ulam(const PiecewiseAffineMap& map, int n_bins,
                     bool allow_nonexpanding = false);

struct Acip {
    std::vector<int> bins;            // recurrent class, ascending
    std::vector<double> density;      // full-size vector, density per bin
    std::vector<Interval> support;    // merged bin runs
    int mixing_period = 1;            // k_i
    std::vector<std::vector<int>> components;  // bins per cyclic class, k_i of them
    double mass = 0.0;                // should be 1 after normalization
};

struct ErgodicDecomposition {
    int n_bins = 0;
    std::vector<Acip> acips;
};

/// Recurrent-class decomposition of the Ulam chain: one acip per class with
/// stationary density (power iteration on the lazy chain), graph mixing
/// period, cyclic components and support intervals.
ErgodicDecomposition ergodic_decomposition(const PiecewiseAffineMap& map, int n_bins,
                                           bool allow_nonexpanding = false,
                                           double density_floor_scale = 1e-9,
                                           double tol_eig = 1e-12, int max_iter = 100000);

/// L1 defect of the stationary equation for a bin-mass vector.
double pushforward_residual(const UlamModel& ulam, const std::vector<double>& mass);

/// Throws AmbiguousSupport when the support endpoints of matching acips move
/// by more than max_drift_bins bins between n_bins and 2*n_bins.
void check_support_stability(const PiecewiseAffineMap& map, int n_bins,
                             double max_drift_bins = 2.0);

struct PeriodicPoint {
    double x = 0.0;       // orbit representative (smallest point of the cycle)
    int period = 0;       // minimal period
    double multiplier = 0.0;  // derivative of the return map along the cycle
    std::vector<double> orbit;
};

/// All periodic cycles of period <= max_period, found exactly by branch-word
/// enumeration with interval pruning. Throws WordExplosion past node_budget.
std::vector<PeriodicPoint> periodic_points(const PiecewiseAffineMap& map, int max_period,
                                           long node_budget = 10000000);

struct DensityGap {
    int acip = 0;
    Interval interval;
};

/// Checks that every support interval of length >= min_len contains a
/// periodic point; returns the uncovered intervals.
std::vector<DensityGap> density_of_periodic_points(const ErgodicDecomposition& dec,
                                                   const std::vector<PeriodicPoint>& pts,
                                                   double min_len);

struct BoundarySegment {
    std::vector<double> points;  // x_0 in D, then boundary points of supp
    bool closes = false;         // terminal point revisits an earlier one
    int acip = 0;
};

struct BoundaryStructure {
    std::vector<BoundarySegment> segments;
    // order kappa per support endpoint: position of the endpoint value,
    // aligned with the flattened list of support interval endpoints
    std::vector<double> endpoint;
    std::vector<int> order;
};

/// Itineraries of the set-valued map starting on D inside supp(mu) and
/// running along the support boundary; assigns the order kappa to every
/// support endpoint. tol is the matching tolerance in arclength (use a few
/// bin widths). Throws UnresolvedBoundary if an endpoint stays uncovered.
BoundaryStructure boundary_segments(const PiecewiseAffineMap& map, const Acip& acip,
                                    double tol, int max_len = 64);

}  // namespace polyerg
