#pragma once

#include <optional>

#include "polyerg/billiard.hpp"
#include "polyerg/pwexp.hpp"

namespace polyerg {

/// Empirical measure of one attractor cluster, accumulated from post-
/// transient samples of member orbits.
struct EmpiricalMeasure {
    std::vector<double> s_marginal;  // normalized histogram, kMarginalBins
    std::vector<double> hist2d;      // s x theta histogram, row-major
    int s_bins = 0;
    int theta_bins = 0;
    double theta_max_seen = 0.0;
    std::vector<Interval> s_support;
    static constexpr int kMarginalBins = 1024;
};

struct SrbCluster {
    EmpiricalMeasure measure;
    double basin_fraction = 0.0;
    int members = 0;
    PhasePoint representative;       // first grid IC assigned to the cluster
    double lyapunov_unstable = 0.0;
    double lyapunov_stable = 0.0;
    int mixing_period = 0;           // 0 until annotated
};

struct SrbReport {
    std::vector<SrbCluster> clusters;
    int grid_nx = 0, grid_ny = 0;
    long n_transient = 0, n_sample = 0;
    double sigma = 0.0;
    int truncated_orbits = 0;
    int total_orbits = 0;
    double theta_bound = 0.0;        // (pi/2) * lambda(f)
    bool strip_certified = false;    // all samples respected the bound
};

/// Orbit-sampled attractor estimate: lattice of initial conditions, long
/// transient, empirical s-marginals clustered by L1 distance. Deterministic
/// for a fixed configuration. Throws TooManyTruncatedOrbits past 20%.
SrbReport find_attractors(const Polygon& p, const ReflectionLaw& f, int grid_nx, int grid_ny,
                          long n_transient, long n_sample, double cluster_tol = 0.1,
                          int threads = 0);

struct LyapunovPair {
    double unstable = 0.0;
    double stable = 0.0;
    long steps = 0;
};

/// Benettin-style Lyapunov exponents along one orbit (QR on 2x2 frames).
LyapunovPair lyapunov(const Polygon& p, const ReflectionLaw& f, PhasePoint x0, long n_steps,
                      long n_transient = 10000);

/// Mixing period of a cluster against the thickened supports of slap-map
/// cyclic components: gcd of return times to the visited strip sequence,
/// 0 when the orbit never settles into the strips.
int mixing_period_estimate(const Polygon& p, const ReflectionLaw& f, PhasePoint rep,
                           const Acip& acip, long n_transient = 10000, long n_sample = 20000,
                           double strip_pad = 0.005);

struct ThetaMatch {
    int cluster = -1;
    int acip = -1;
    double mass_in_support = 0.0;
    bool period_match = false;
};

struct ThetaCorrespondence {
    bool bijective = false;
    bool periods_match = false;
    std::vector<ThetaMatch> matches;
};

/// Matches SRB clusters to slap acips: a cluster matches the acip holding at
/// least (1 - match_tol) of its s-marginal mass inside the thickened
/// support. Checks bijectivity and equality of mixing periods.
ThetaCorrespondence theta_correspondence(const ErgodicDecomposition& dec,
                                         const SrbReport& srb, double match_tol = 0.05,
                                         double strip_pad = 0.01);

/// Curve of phase points on the side of s whose chords all pass through the
/// landing point of the normal chord from s: theta(sbar) = atan((x - xbar)/h)
/// with (x, h) the landing point in side coordinates. Passes through (s, 0)
/// and ends on the vertical lines over the side's vertices.
struct GammaCurve {
    double s = 0.0;
    int side = -1;
    double target_offset = 0.0;  // x: landing point along the side tangent
    double height = 0.0;         // h: landing point's distance to the side
    std::vector<PhasePoint> points;
};
GammaCurve gamma_curve(const Polygon& p, double s, int n_points = 256);

struct TrappingRectangle {
    Interval base;          // inflated support interval [alpha', beta']
    double delta = 0.0;     // vertical half-height
    double h_left = 0.0;    // chord heights at the two lateral curves
    double h_right = 0.0;
    int kappa_left = 0;
    int kappa_right = 0;
};

struct TrappingRegion {
    std::vector<TrappingRectangle> rectangles;
    double delta = 0.0;
    double eps = 0.0;
    bool full_circle = false;  // supp = [0,1]: the region is a full strip
};

/// Region R(mu) from an acip support: each interval inflated by
/// (2a)^kappa * eps at its endpoints (a = max |slope|, kappa the boundary
/// order), with lateral boundaries along the vertical singular curves and
/// height delta from the vertex clearance. Throws EpsTooLarge when inflated
/// rectangles collide or swallow a vertex.
TrappingRegion build_trapping_region(const Polygon& p, const PiecewiseAffineMap& psi,
                                     const Acip& acip, double eps,
                                     double full_strip_delta = 0.1);

struct InvarianceCheck {
    bool pass = false;
    double margin = 0.0;      // worst signed inclusion margin of the images
    PhasePoint worst_point;
    int samples = 0;
};

/// Samples the region boundary and interior and checks Phi(R) stays in R.
InvarianceCheck check_forward_invariance(const Polygon& p, const ReflectionLaw& f,
                                         const TrappingRegion& region, int boundary_samples);

struct ContinuedOrbit {
    bool ok = false;
    std::vector<PhasePoint> points;  // one period
    int period = 0;
    double residual = 0.0;
    double eig_unstable = 0.0;       // eigenvalues of D(Phi^k)
    double eig_stable = 0.0;
    std::vector<int> sides;          // side itinerary
    bool itinerary_match = false;
    int newton_steps = 0;
};

/// Continues a slap periodic orbit (theta = 0) to a contracting law by
/// damped Newton on Phi^k(z) - z. Residual target 1e-10; checks hyperbolic
/// eigenvalues and that the side itinerary is unchanged.
ContinuedOrbit continue_periodic_orbit(const Polygon& p, const ReflectionLaw& f,
                                       const std::vector<double>& slap_orbit,
                                       int max_steps = 50, double tol = 1e-10);

}  // namespace polyerg
