#include "polyerg/srb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

namespace polyerg {

namespace {

constexpr int kHist2dS = 128;
constexpr int kHist2dTheta = 64;

int env_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* e = std::getenv("POLYERG_THREADS")) {
        int v = std::atoi(e);
        if (v > 0) return v;
    }
    return 1;
}

struct OrbitStats {
    std::vector<double> marginal;  // kMarginalBins, unnormalized counts
    std::vector<double> hist2d;    // kHist2dS x kHist2dTheta
    double theta_max = 0.0;
    bool truncated = false;
    long sampled = 0;
};

OrbitStats sample_orbit(const Polygon& p, const ReflectionLaw& f, PhasePoint x0,
                        long n_transient, long n_sample, double theta_bound) {
    OrbitStats st;
    st.marginal.assign(EmpiricalMeasure::kMarginalBins, 0.0);
    st.hist2d.assign(kHist2dS * kHist2dTheta, 0.0);
    PhasePoint x = x0;
    for (long k = 0; k < n_transient; ++k) {
        StepOutcome out = contracting_step(p, f, x);
        if (!out.ok()) {
            st.truncated = true;
            return st;
        }
        x = out.next;
    }
    const int mb = EmpiricalMeasure::kMarginalBins;
    const double tspan = std::max(theta_bound * 1.5, 1e-3);
    for (long k = 0; k < n_sample; ++k) {
        StepOutcome out = contracting_step(p, f, x);
        if (!out.ok()) {
            st.truncated = true;
            return st;
        }
        x = out.next;
        int sb = std::min(mb - 1, static_cast<int>(x.s * mb));
        st.marginal[sb] += 1.0;
        st.theta_max = std::max(st.theta_max, std::fabs(x.theta));
        int hs = std::min(kHist2dS - 1, static_cast<int>(x.s * kHist2dS));
        double tn = 0.5 + 0.5 * x.theta / tspan;
        int ht = std::clamp(static_cast<int>(tn * kHist2dTheta), 0, kHist2dTheta - 1);
        st.hist2d[hs * kHist2dTheta + ht] += 1.0;
        ++st.sampled;
    }
    return st;
}

double l1(const std::vector<double>& a, const std::vector<double>& b) {
    double r = 0.0;
    for (size_t i = 0; i < a.size(); ++i) r += std::fabs(a[i] - b[i]);
    return r;
}

// wrap-aware box filter + normalization: the clustering distance must not be
// dominated by per-bin sampling noise, which the raw 1024-bin histograms are
std::vector<double> smoothed_norm(const std::vector<double>& marg) {
    const int n = static_cast<int>(marg.size());
    const int w = 64;  // half-window; effective resolution ~ n/(2w+1)
    std::vector<double> out(n, 0.0);
    double acc = 0.0;
    for (int k = -w; k <= w; ++k) acc += marg[(k + n) % n];
    for (int i = 0; i < n; ++i) {
        out[i] = acc;
        acc -= marg[(i - w + n) % n];
        acc += marg[(i + w + 1) % n];
    }
    double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (total > 0)
        for (auto& v : out) v /= total;
    return out;
}

std::vector<Interval> marginal_support(const std::vector<double>& marg, double floor_frac) {
    const int n = static_cast<int>(marg.size());
    double total = std::accumulate(marg.begin(), marg.end(), 0.0);
    double thr = floor_frac * total / n;
    std::vector<int> bins;
    for (int i = 0; i < n; ++i)
        if (marg[i] > thr) bins.push_back(i);
    std::vector<Interval> out;
    for (size_t i = 0; i < bins.size();) {
        size_t j = i;
        while (j + 1 < bins.size() && bins[j + 1] <= bins[j] + 2) ++j;  // bridge 1-bin gaps
        out.push_back({static_cast<double>(bins[i]) / n, static_cast<double>(bins[j] + 1) / n});
        i = j + 1;
    }
    if (out.size() >= 2 && out.front().a == 0.0 && std::fabs(out.back().b - 1.0) < 1e-12) {
        out.back().b = 1.0 + out.front().b;
        out.erase(out.begin());
    }
    return out;
}

}  // namespace

SrbReport find_attractors(const Polygon& p, const ReflectionLaw& f, int grid_nx, int grid_ny,
                          long n_transient, long n_sample, double cluster_tol, int threads) {
    SrbReport rep;
    rep.grid_nx = grid_nx;
    rep.grid_ny = grid_ny;
    rep.n_transient = n_transient;
    rep.n_sample = n_sample;
    rep.sigma = f.sigma();
    rep.theta_bound = M_PI / 2 * f.lambda();
    rep.total_orbits = grid_nx * grid_ny;

    const int nthreads = env_threads(threads);
    const double theta_span = M_PI / 2 * 0.995;

    struct ClusterAcc {
        std::vector<double> mean;      // normalized marginal
        std::vector<double> marg_sum;  // raw counts
        std::vector<double> hist_sum;
        int members = 0;
        PhasePoint rep;
        double theta_max = 0.0;
    };
    std::vector<ClusterAcc> clusters;

    const int total = grid_nx * grid_ny;
    std::vector<OrbitStats> block(nthreads);
    for (int base = 0; base < total; base += nthreads) {
        int count = std::min(nthreads, total - base);
        auto worker = [&](int k) {
            int idx = base + k;
            int i = idx % grid_nx, j = idx / grid_nx;
            PhasePoint x0{(i + 0.5) / grid_nx, -theta_span + (j + 0.5) * 2 * theta_span / grid_ny};
            block[k] = sample_orbit(p, f, x0, n_transient, n_sample, rep.theta_bound);
        };
        if (count == 1) {
            worker(0);
        } else {
            std::vector<std::thread> pool;
            for (int k = 0; k < count; ++k) pool.emplace_back(worker, k);
            for (auto& t : pool) t.join();
        }
        for (int k = 0; k < count; ++k) {
            OrbitStats& st = block[k];
            int idx = base + k;
            int i = idx % grid_nx, j = idx / grid_nx;
            PhasePoint x0{(i + 0.5) / grid_nx, -theta_span + (j + 0.5) * 2 * theta_span / grid_ny};
            if (st.truncated || st.sampled == 0) {
                ++rep.truncated_orbits;
                continue;
            }
            std::vector<double> norm = smoothed_norm(st.marginal);
            int best = -1;
            double bestd = cluster_tol;
            for (size_t c = 0; c < clusters.size(); ++c) {
                double dd = l1(norm, clusters[c].mean);
                if (dd < bestd) {
                    bestd = dd;
                    best = static_cast<int>(c);
                }
            }
            if (best < 0) {
                ClusterAcc acc;
                acc.mean = norm;
                acc.marg_sum = st.marginal;
                acc.hist_sum = st.hist2d;
                acc.members = 1;
                acc.rep = x0;
                acc.theta_max = st.theta_max;
                clusters.push_back(std::move(acc));
            } else {
                ClusterAcc& acc = clusters[best];
                for (size_t q = 0; q < acc.marg_sum.size(); ++q) acc.marg_sum[q] += st.marginal[q];
                for (size_t q = 0; q < acc.hist_sum.size(); ++q) acc.hist_sum[q] += st.hist2d[q];
                ++acc.members;
                acc.mean = smoothed_norm(acc.marg_sum);
                acc.theta_max = std::max(acc.theta_max, st.theta_max);
            }
        }
    }

    if (rep.truncated_orbits > 0.2 * rep.total_orbits)
        throw TooManyTruncatedOrbits("more than 20% of orbits hit the singular set");

    // merge clusters whose means drifted together
    bool merged = true;
    while (merged) {
        merged = false;
        for (size_t a = 0; a < clusters.size() && !merged; ++a) {
            for (size_t b = a + 1; b < clusters.size() && !merged; ++b) {
                if (l1(clusters[a].mean, clusters[b].mean) < cluster_tol) {
                    ClusterAcc& A = clusters[a];
                    ClusterAcc& B = clusters[b];
                    for (size_t q = 0; q < A.marg_sum.size(); ++q) A.marg_sum[q] += B.marg_sum[q];
                    for (size_t q = 0; q < A.hist_sum.size(); ++q) A.hist_sum[q] += B.hist_sum[q];
                    A.members += B.members;
                    A.mean = smoothed_norm(A.marg_sum);
                    A.theta_max = std::max(A.theta_max, B.theta_max);
                    clusters.erase(clusters.begin() + b);
                    merged = true;
                }
            }
        }
    }

    rep.strip_certified = true;
    for (auto& acc : clusters) {
        SrbCluster cl;
        cl.measure.s_marginal = acc.marg_sum;
        double msum = std::accumulate(cl.measure.s_marginal.begin(),
                                      cl.measure.s_marginal.end(), 0.0);
        if (msum > 0)
            for (auto& v : cl.measure.s_marginal) v /= msum;
        cl.measure.hist2d = acc.hist_sum;
        cl.measure.s_bins = kHist2dS;
        cl.measure.theta_bins = kHist2dTheta;
        cl.measure.theta_max_seen = acc.theta_max;
        cl.measure.s_support = marginal_support(acc.marg_sum, 1e-6);
        cl.members = acc.members;
        cl.basin_fraction = static_cast<double>(acc.members) / rep.total_orbits;
        cl.representative = acc.rep;
        LyapunovPair ly = lyapunov(p, f, acc.rep, 20000, n_transient);
        cl.lyapunov_unstable = ly.unstable;
        cl.lyapunov_stable = ly.stable;
        if (acc.theta_max > rep.theta_bound + 1e-12) rep.strip_certified = false;
        rep.clusters.push_back(std::move(cl));
    }
    std::sort(rep.clusters.begin(), rep.clusters.end(),
              [](const SrbCluster& a, const SrbCluster& b) {
                  auto lo = [](const SrbCluster& c) {
                      return c.measure.s_support.empty() ? 2.0 : c.measure.s_support[0].a;
                  };
                  return lo(a) < lo(b);
              });
    return rep;
}

LyapunovPair lyapunov(const Polygon& p, const ReflectionLaw& f, PhasePoint x0, long n_steps,
                      long n_transient) {
    PhasePoint x = x0;
    for (long k = 0; k < n_transient; ++k) {
        StepOutcome out = contracting_step(p, f, x);
        if (!out.ok()) throw OrbitTruncated("lyapunov transient hit the singular set");
        x = out.next;
    }
    double v1x = 1, v1y = 0, v2x = 0, v2y = 1;
    double sum1 = 0, sum2 = 0;
    long done = 0;
    for (long k = 0; k < n_steps; ++k) {
        StepOutcome out = billiard_step(p, x);
        if (!out.ok()) break;
        double ca = std::cos(out.theta_arrival);
        double a11 = -std::cos(x.theta) / ca;
        double a12 = -out.chord / ca;
        double a22 = -f.derivative(out.theta_arrival);
        x = {out.next.s, f.value(out.theta_arrival)};
        double w1x = a11 * v1x + a12 * v1y, w1y = a22 * v1y;
        double w2x = a11 * v2x + a12 * v2y, w2y = a22 * v2y;
        double r11 = std::hypot(w1x, w1y);
        w1x /= r11;
        w1y /= r11;
        double r12 = w1x * w2x + w1y * w2y;
        w2x -= r12 * w1x;
        w2y -= r12 * w1y;
        double r22 = std::hypot(w2x, w2y);
        if (r22 > 0) {
            w2x /= r22;
            w2y /= r22;
        }
        sum1 += std::log(r11);
        sum2 += std::log(std::max(r22, 1e-300));
        v1x = w1x;
        v1y = w1y;
        v2x = w2x;
        v2y = w2y;
        ++done;
    }
    LyapunovPair ly;
    ly.steps = done;
    if (done > 0) {
        ly.unstable = sum1 / done;
        ly.stable = sum2 / done;
        if (ly.unstable < ly.stable) std::swap(ly.unstable, ly.stable);
    }
    return ly;
}

int mixing_period_estimate(const Polygon& p, const ReflectionLaw& f, PhasePoint rep,
                           const Acip& acip, long n_transient, long n_sample,
                           double strip_pad) {
    const int n = static_cast<int>(acip.density.size());
    const int k = acip.mixing_period;
    if (k <= 0 || n == 0) return 0;
    std::vector<int> label(n, -1);
    for (int c = 0; c < k; ++c)
        for (int b : acip.components[c]) label[b] = c;
    // dilate labels by the pad so that slightly displaced SRB samples count
    int pad_bins = std::max(1, static_cast<int>(strip_pad * n));
    std::vector<int> dilated = label;
    for (int b = 0; b < n; ++b) {
        if (label[b] < 0) continue;
        for (int o = -pad_bins; o <= pad_bins; ++o) {
            int t = ((b + o) % n + n) % n;
            if (dilated[t] == -1) dilated[t] = label[b];
        }
    }

    PhasePoint x = rep;
    for (long q = 0; q < n_transient; ++q) {
        StepOutcome out = contracting_step(p, f, x);
        if (!out.ok()) return 0;
        x = out.next;
    }
    int ref = -1;
    long g = 0, last = -1;
    for (long q = 0; q < n_sample; ++q) {
        StepOutcome out = contracting_step(p, f, x);
        if (!out.ok()) break;
        x = out.next;
        int b = std::min(n - 1, static_cast<int>(x.s * n));
        int c = dilated[b];
        if (c < 0) continue;
        if (ref < 0) ref = c;
        if (c == ref) {
            if (last >= 0) g = std::gcd(g, q - last);
            last = q;
        }
    }
    return static_cast<int>(g);
}

ThetaCorrespondence theta_correspondence(const ErgodicDecomposition& dec, const SrbReport& srb,
                                         double match_tol, double strip_pad) {
    ThetaCorrespondence tc;
    const int nb = EmpiricalMeasure::kMarginalBins;
    std::vector<int> acip_hits(dec.acips.size(), 0);
    bool all_matched = !srb.clusters.empty();
    tc.periods_match = true;
    for (size_t c = 0; c < srb.clusters.size(); ++c) {
        const auto& marg = srb.clusters[c].measure.s_marginal;
        ThetaMatch best;
        best.cluster = static_cast<int>(c);
        for (size_t a = 0; a < dec.acips.size(); ++a) {
            double mass = 0.0;
            for (int b = 0; b < nb; ++b) {
                if (marg[b] == 0.0) continue;
                double s = (b + 0.5) / nb;
                for (const auto& iv : dec.acips[a].support)
                    if (iv.contains(s, strip_pad)) {
                        mass += marg[b];
                        break;
                    }
            }
            if (mass > best.mass_in_support) {
                best.mass_in_support = mass;
                best.acip = static_cast<int>(a);
            }
        }
        if (best.acip >= 0 && best.mass_in_support >= 1.0 - match_tol) {
            ++acip_hits[best.acip];
            best.period_match =
                srb.clusters[c].mixing_period == dec.acips[best.acip].mixing_period;
            if (!best.period_match) tc.periods_match = false;
        } else {
            all_matched = false;
        }
        tc.matches.push_back(best);
    }
    bool onto = dec.acips.size() == srb.clusters.size();
    for (int h : acip_hits)
        if (h != 1) onto = false;
    tc.bijective = all_matched && onto;
    if (srb.clusters.empty()) tc.periods_match = false;
    return tc;
}

GammaCurve gamma_curve(const Polygon& p, double s, int n_points) {
    GammaCurve g;
    g.s = wrap01(s);
    StepOutcome st = billiard_step(p, {g.s, 0.0});
    if (!st.ok()) throw SingularPoint("normal chord from s is singular");
    int i = p.side_of(g.s);
    g.side = i;
    Vec2 q = p.vertices[st.side_to] +
             p.sides[st.side_to].tangent * (st.next.s - p.side_breaks[st.side_to]);
    Vec2 rel = q - p.vertices[i];
    g.target_offset = rel.dot(p.sides[i].tangent);
    g.height = rel.dot(p.sides[i].normal);
    for (int k = 0; k < n_points; ++k) {
        double xbar = p.sides[i].length * (k + 0.5) / n_points;
        double theta = std::atan((g.target_offset - xbar) / g.height);
        g.points.push_back({p.side_breaks[i] + xbar, theta});
    }
    return g;
}

namespace {

// lateral boundary through arclength y at angle theta: s(theta) = y - h*tan(theta)
double lateral_s(double y, double h, double theta) { return y - h * std::tan(theta); }

// chord height of the boundary point y (distance of the normal-chord landing
// point from y's side)
double chord_height(const Polygon& p, double y) {
    StepOutcome st = billiard_step(p, {wrap01(y), 0.0});
    if (!st.ok()) throw SingularPoint("trapping endpoint has a singular normal chord");
    int i = p.side_of(wrap01(y));
    Vec2 q = p.vertices[st.side_to] +
             p.sides[st.side_to].tangent * (st.next.s - p.side_breaks[st.side_to]);
    return (q - p.vertices[i]).dot(p.sides[i].normal);
}

}  // namespace

TrappingRegion build_trapping_region(const Polygon& p, const PiecewiseAffineMap& psi,
                                     const Acip& acip, double eps, double full_strip_delta) {
    TrappingRegion reg;
    reg.eps = eps;
    const int n = static_cast<int>(acip.density.size());

    // full-support acip: the region is the whole strip |theta| <= delta
    double covered = 0.0;
    for (const auto& iv : acip.support) covered += iv.length();
    // threshold matches boundary_segments' full-circle cutoff (tol = 3/n)
    if (covered >= 1.0 - 3.0 / std::max(1, n)) {
        reg.full_circle = true;
        reg.delta = full_strip_delta;
        TrappingRectangle r;
        r.base = {0.0, 1.0};
        r.delta = full_strip_delta;
        reg.rectangles.push_back(r);
        return reg;
    }

    BoundaryStructure bs = boundary_segments(psi, acip, 3.0 / n);
    const double a = psi.max_abs_slope();

    for (size_t i = 0; i < acip.support.size(); ++i) {
        const Interval& iv = acip.support[i];
        int kl = bs.order[2 * i];
        int kr = bs.order[2 * i + 1];
        TrappingRectangle r;
        r.kappa_left = kl;
        r.kappa_right = kr;
        r.base = {iv.a - std::pow(2 * a, kl) * eps, iv.b + std::pow(2 * a, kr) * eps};
        if (r.base.length() >= 1.0) throw EpsTooLarge("inflated rectangle covers the circle");
        r.h_left = chord_height(p, r.base.a);
        r.h_right = chord_height(p, r.base.b);
        reg.rectangles.push_back(r);
    }

    // disjointness of the inflated bases and clearance from the vertices
    double min_vertex_clear = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < reg.rectangles.size(); ++i) {
        const auto& ri = reg.rectangles[i].base;
        for (size_t j = i + 1; j < reg.rectangles.size(); ++j) {
            const auto& rj = reg.rectangles[j].base;
            bool overlap = false;
            for (int sp = -1; sp <= 1; ++sp)
                if (std::max(ri.a + sp, rj.a) < std::min(ri.b + sp, rj.b)) overlap = true;
            if (overlap) throw EpsTooLarge("inflated rectangles overlap");
        }
        // vertices must not fall in the inflation collars B \ A
        for (int v = 0; v < p.num_sides(); ++v) {
            double sv = p.side_breaks[v];
            bool in_b = reg.rectangles[i].base.contains(sv);
            bool in_a = acip.support[i].contains(sv);
            if (in_b && !in_a) throw EpsTooLarge("inflation collar swallowed a vertex");
        }
        min_vertex_clear = std::min(min_vertex_clear,
                                    std::min(p.vertex_distance(wrap01(ri.a)),
                                             p.vertex_distance(wrap01(ri.b))));
    }

    // vertical half-height: keep the lateral curves graph-like over the base,
    // bounded by the endpoint chord geometry and the vertex clearance
    double delta = std::numeric_limits<double>::infinity();
    for (const auto& r : reg.rectangles) {
        delta = std::min(delta, std::atan(min_vertex_clear / r.h_left));
        delta = std::min(delta, std::atan(min_vertex_clear / r.h_right));
    }
    reg.delta = 0.9 * delta;
    for (auto& r : reg.rectangles) r.delta = reg.delta;
    return reg;
}

namespace {

// signed inclusion margin of (s, theta) in the region; negative when outside
double region_margin(const TrappingRegion& reg, PhasePoint z) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& r : reg.rectangles) {
        double mtheta = r.delta - std::fabs(z.theta);
        double mlat;
        if (reg.full_circle) {
            mlat = 0.25;  // whole circle: no lateral constraint
        } else {
            double left = lateral_s(r.base.a, r.h_left, z.theta);
            double right = lateral_s(r.base.b, r.h_right, z.theta);
            double width = right - left;
            double rel = z.s - left;
            rel -= std::floor(rel);  // wrap into [0,1)
            mlat = std::min(rel, width - rel);
            if (rel > width) mlat = -std::min(rel - width, 1.0 - rel);
        }
        best = std::max(best, std::min(mtheta, mlat));
    }
    return best;
}

}  // namespace

InvarianceCheck check_forward_invariance(const Polygon& p, const ReflectionLaw& f,
                                         const TrappingRegion& region, int boundary_samples) {
    InvarianceCheck chk;
    chk.margin = std::numeric_limits<double>::infinity();
    chk.pass = true;
    int per_rect = std::max(16, boundary_samples / std::max<int>(1, region.rectangles.size()));
    for (const auto& r : region.rectangles) {
        int per_edge = per_rect / 4;
        for (int e = 0; e < 4; ++e) {
            for (int k = 0; k < per_edge; ++k) {
                double u = (k + 0.5) / per_edge;
                PhasePoint z;
                if (e < 2) {  // top and bottom edges
                    z.theta = (e == 0 ? region.delta : -region.delta);
                    if (region.full_circle) {
                        z.s = u;
                    } else {
                        double left = lateral_s(r.base.a, r.h_left, z.theta);
                        double right = lateral_s(r.base.b, r.h_right, z.theta);
                        z.s = left + u * (right - left);
                    }
                } else {  // lateral curves
                    if (region.full_circle) continue;
                    z.theta = -region.delta + u * 2 * region.delta;
                    double y = (e == 2 ? r.base.a : r.base.b);
                    double h = (e == 2 ? r.h_left : r.h_right);
                    z.s = lateral_s(y, h, z.theta);
                }
                z.s = wrap01(z.s);
                StepOutcome out = contracting_step(p, f, z);
                ++chk.samples;
                if (!out.ok()) continue;  // singular boundary grazing: skip
                double m = region_margin(region, out.next);
                if (m < chk.margin) {
                    chk.margin = m;
                    chk.worst_point = z;
                }
                if (m <= 0) chk.pass = false;
            }
        }
    }
    return chk;
}

ContinuedOrbit continue_periodic_orbit(const Polygon& p, const ReflectionLaw& f,
                                       const std::vector<double>& slap_orbit, int max_steps,
                                       double tol) {
    ContinuedOrbit co;
    co.period = static_cast<int>(slap_orbit.size());
    if (co.period == 0) return co;

    auto eval_cycle = [&](PhasePoint z, std::vector<int>* sides,
                          Jacobian2* jac) -> std::optional<PhasePoint> {
        Jacobian2 J{1, 0, 0, 1};
        if (sides) sides->clear();
        PhasePoint x = z;
        for (int k = 0; k < co.period; ++k) {
            StepOutcome out = billiard_step(p, x);
            if (!out.ok()) return std::nullopt;
            if (sides) sides->push_back(out.side_to);
            double ca = std::cos(out.theta_arrival);
            Jacobian2 D{-std::cos(x.theta) / ca, -out.chord / ca, 0.0,
                        -f.derivative(out.theta_arrival)};
            Jacobian2 next{D.a11 * J.a11 + D.a12 * J.a21, D.a11 * J.a12 + D.a12 * J.a22,
                           D.a22 * J.a21, D.a22 * J.a22};
            J = next;
            x = {out.next.s, f.value(out.theta_arrival)};
        }
        if (jac) *jac = J;
        return x;
    };
    auto defect = [&](PhasePoint z, PhasePoint img) {
        double ds = img.s - z.s;
        ds -= std::round(ds);  // shortest circle difference
        return std::array<double, 2>{ds, img.theta - z.theta};
    };

    PhasePoint z{slap_orbit[0], 0.0};
    Jacobian2 J;
    auto img = eval_cycle(z, nullptr, &J);
    if (!img) throw SingularPoint("periodic seed is singular");
    auto g = defect(z, *img);
    double res = std::max(std::fabs(g[0]), std::fabs(g[1]));

    for (int it = 0; it < max_steps && res > tol; ++it) {
        // solve (J - I) dz = -g
        double a = J.a11 - 1, b = J.a12, c = J.a21, d = J.a22 - 1;
        double det = a * d - b * c;
        if (std::fabs(det) < 1e-14) throw NewtonDiverged("singular Newton system");
        double dzs = (-g[0] * d + g[1] * b) / det;
        double dzt = (-a * g[1] + c * g[0]) / det;
        double damp = 1.0;
        bool moved = false;
        for (int h = 0; h < 12; ++h) {
            PhasePoint trial{wrap01(z.s + damp * dzs), z.theta + damp * dzt};
            auto timg = eval_cycle(trial, nullptr, nullptr);
            if (timg) {
                auto tg = defect(trial, *timg);
                double tres = std::max(std::fabs(tg[0]), std::fabs(tg[1]));
                if (tres < res || h == 11) {
                    z = trial;
                    res = tres;
                    moved = true;
                    break;
                }
            }
            damp *= 0.5;
        }
        ++co.newton_steps;
        if (!moved) break;
        img = eval_cycle(z, nullptr, &J);
        if (!img) break;
        g = defect(z, *img);
        res = std::max(std::fabs(g[0]), std::fabs(g[1]));
    }
    co.residual = res;
    if (res > tol) {
        co.ok = false;
        return co;
    }

    std::vector<int> sides;
    img = eval_cycle(z, &sides, &J);
    co.sides = sides;
    co.points.clear();
    PhasePoint x = z;
    for (int k = 0; k < co.period; ++k) {
        co.points.push_back(x);
        StepOutcome out = contracting_step(p, f, x);
        if (!out.ok()) break;
        x = out.next;
    }

    // eigenvalues of the cycle Jacobian (triangular: a21 = 0)
    co.eig_unstable = J.a11;
    co.eig_stable = J.a22;
    if (std::fabs(co.eig_unstable) < std::fabs(co.eig_stable))
        std::swap(co.eig_unstable, co.eig_stable);
    bool hyper = std::fabs(co.eig_unstable) > 1 + 1e-8 && std::fabs(co.eig_stable) < 1 - 1e-8;

    // side itinerary must match the slap orbit's
    std::vector<int> ref;
    PhasePoint zs{slap_orbit[0], 0.0};
    // the slap orbit visits the sides of its own points in order
    Polygon const& poly = p;
    ref.clear();
    for (size_t k = 0; k < slap_orbit.size(); ++k)
        ref.push_back(poly.side_of(slap_orbit[(k + 1) % slap_orbit.size()]));
    co.itinerary_match = (sides == ref);
    (void)zs;

    co.ok = hyper && co.itinerary_match;
    return co;
}

}  // namespace polyerg
