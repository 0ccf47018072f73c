#include "polyerg/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "polyerg/slapmap.hpp"

namespace polyerg {

namespace {
constexpr double kThetaClamp = M_PI / 2 - 1e-6;
}

ReflectionLaw ReflectionLaw::specular() {
    ReflectionLaw r;
    r.kind_ = Kind::Specular;
    r.sigma_ = 1.0;
    r.lambda_ = 1.0;
    r.f_ = [](double t) { return t; };
    r.fp_ = [](double) { return 1.0; };
    return r;
}

ReflectionLaw ReflectionLaw::slap() {
    ReflectionLaw r;
    r.kind_ = Kind::Slap;
    r.sigma_ = 0.0;
    r.lambda_ = 0.0;
    r.f_ = [](double) { return 0.0; };
    r.fp_ = [](double) { return 0.0; };
    return r;
}

ReflectionLaw ReflectionLaw::linear(double sigma) {
    ReflectionLaw r;
    r.kind_ = sigma == 0.0 ? Kind::Slap : Kind::Linear;
    r.sigma_ = sigma;
    r.lambda_ = std::fabs(sigma);
    r.f_ = [sigma](double t) { return sigma * t; };
    r.fp_ = [sigma](double) { return sigma; };
    return r;
}

ReflectionLaw ReflectionLaw::custom(std::function<double(double)> f,
                                    std::function<double(double)> fp, double lambda) {
    ReflectionLaw r;
    r.kind_ = Kind::Custom;
    r.lambda_ = lambda;
    r.sigma_ = lambda;
    r.f_ = std::move(f);
    r.fp_ = std::move(fp);
    return r;
}

StepOutcome billiard_step(const Polygon& p, PhasePoint x, double eps_vertex) {
    StepOutcome out;
    if (std::fabs(x.theta) > kThetaClamp) {
        out.status = StepOutcome::Status::Tangency;
        return out;
    }
    double s = wrap01(x.s);
    if (p.vertex_distance(s) < eps_vertex) {
        out.status = StepOutcome::Status::SourceAtVertex;
        return out;
    }
    int i = p.side_of(s);
    Vec2 pos = p.vertices[i] + p.sides[i].tangent * (s - p.side_breaks[i]);
    double c = std::cos(x.theta), sn = std::sin(x.theta);
    Vec2 dir = p.sides[i].normal * c + p.sides[i].tangent * sn;

    RayHit hit = first_boundary_hit(p, pos, dir, i);
    if (hit.side < 0) {
        out.status = StepOutcome::Status::Tangency;
        return out;
    }
    int j = hit.side;
    out.side_from = i;
    out.side_to = j;
    out.chord = hit.t;
    out.next.s = wrap01(p.side_breaks[j] + hit.y);
    out.theta_arrival = std::atan2(dir.dot(p.sides[j].tangent), -dir.dot(p.sides[j].normal));
    out.next.theta = out.theta_arrival;
    if (hit.y < eps_vertex || hit.y > p.sides[j].length - eps_vertex)
        out.status = StepOutcome::Status::VertexHit;
    return out;
}

StepOutcome contracting_step(const Polygon& p, const ReflectionLaw& f, PhasePoint x,
                             double eps_vertex) {
    StepOutcome out = billiard_step(p, x, eps_vertex);
    if (out.ok()) out.next.theta = f.value(out.theta_arrival);
    return out;
}

Jacobian2 dphi(const Polygon& p, const ReflectionLaw& f, PhasePoint x, double eps_vertex) {
    StepOutcome st = billiard_step(p, x, eps_vertex);
    if (!st.ok()) throw SingularPoint("derivative requested at a singular point");
    double ct = std::cos(x.theta), ca = std::cos(st.theta_arrival);
    Jacobian2 j;
    j.a11 = -ct / ca;
    j.a12 = -st.chord / ca;
    j.a21 = 0.0;
    j.a22 = -f.derivative(st.theta_arrival);
    return j;
}

Orbit orbit(const Polygon& p, const ReflectionLaw& f, PhasePoint x0, int n_steps,
            double eps_singular) {
    Orbit orb;
    orb.points.push_back(x0);
    PhasePoint x = x0;
    for (int k = 0; k < n_steps; ++k) {
        StepOutcome st = contracting_step(p, f, x, eps_singular);
        if (!st.ok()) {
            orb.truncated = true;
            orb.stop_reason = st.status;
            break;
        }
        x = st.next;
        orb.points.push_back(x);
    }
    return orb;
}

namespace {

// itinerary of landing sides for up to n steps; shorter when truncated
struct Itinerary {
    std::vector<int> sides;
    bool truncated = false;
};

Itinerary itinerary_of(const Polygon& p, const ReflectionLaw& f, PhasePoint x, int n,
                       double eps) {
    Itinerary it;
    for (int k = 0; k < n; ++k) {
        StepOutcome st = contracting_step(p, f, x, eps);
        if (!st.ok()) {
            it.truncated = true;
            break;
        }
        it.sides.push_back(st.side_to);
        x = st.next;
    }
    return it;
}

// depth (1-based) of the first disagreement between two itineraries; 0 if
// they agree on the full horizon
int first_split(const Itinerary& a, const Itinerary& b, int n) {
    size_t m = std::min(a.sides.size(), b.sides.size());
    for (size_t k = 0; k < m; ++k)
        if (a.sides[k] != b.sides[k]) return static_cast<int>(k) + 1;
    if (a.sides.size() != b.sides.size()) return static_cast<int>(m) + 1;
    if (a.truncated != b.truncated && static_cast<int>(m) < n)
        return static_cast<int>(m) + 1;
    return 0;
}

}  // namespace

SingularSet singular_set(const Polygon& p, const ReflectionLaw& f, int n, int resolution) {
    if (resolution < 8) throw ResolutionTooCoarse();
    SingularSet ss;
    ss.n = n;
    ss.resolution = resolution;

    struct Root {
        double s, theta;
        int depth;
        std::vector<int> prefix;  // sides before the split, then both sides at it
    };
    std::vector<std::vector<Root>> per_scanline(resolution);

    const double margin = 1e-3;
    const double eps = 1e-12;
    for (int k = 0; k < resolution; ++k) {
        double theta = -M_PI / 2 + margin +
                       (k + 0.5) * (M_PI - 2 * margin) / resolution;
        std::vector<double> sgrid;
        std::vector<Itinerary> its;
        for (int i = 0; i <= resolution; ++i) {
            double s = (i + 0.5) / (resolution + 1);
            if (p.vertex_distance(s) < 1e-9) s += 2e-9;
            sgrid.push_back(s);
            its.push_back(itinerary_of(p, f, {s, theta}, n, eps));
        }
        for (int i = 0; i + 1 <= resolution; ++i) {
            if (p.side_of(sgrid[i]) != p.side_of(sgrid[i + 1])) continue;
            int depth = first_split(its[i], its[i + 1], n);
            if (depth == 0) continue;
            // bisect on the side taken at the splitting depth
            double lo = sgrid[i], hi = sgrid[i + 1];
            Itinerary itlo = its[i];
            for (int b = 0; b < 60 && hi - lo > 1e-13; ++b) {
                double mid = 0.5 * (lo + hi);
                Itinerary itm = itinerary_of(p, f, {mid, theta}, depth, eps);
                bool same = !first_split(itlo, itm, depth);
                if (same)
                    lo = mid, itlo = itm;
                else
                    hi = mid;
            }
            Root r;
            r.s = 0.5 * (lo + hi);
            r.theta = theta;
            r.depth = depth;
            for (int q = 0; q + 1 < depth && q < static_cast<int>(its[i].sides.size()); ++q)
                r.prefix.push_back(its[i].sides[q]);
            r.prefix.push_back(depth - 1 < static_cast<int>(its[i].sides.size())
                                   ? its[i].sides[depth - 1]
                                   : -1);
            r.prefix.push_back(depth - 1 < static_cast<int>(its[i + 1].sides.size())
                                   ? its[i + 1].sides[depth - 1]
                                   : -1);
            per_scanline[k].push_back(r);
        }
    }

    // chain roots with the same depth and branch signature into curves
    std::map<std::pair<int, std::vector<int>>, SingularCurve> curves;
    for (int k = 0; k < resolution; ++k) {
        for (const auto& r : per_scanline[k]) {
            auto key = std::make_pair(r.depth, r.prefix);
            auto& c = curves[key];
            c.depth = r.depth;
            c.points.push_back({r.s, r.theta});
        }
    }
    for (auto& [key, c] : curves) {
        std::sort(c.points.begin(), c.points.end(),
                  [](const PhasePoint& a, const PhasePoint& b) { return a.theta < b.theta; });
        ss.curves.push_back(std::move(c));
    }
    return ss;
}

int branching_number(const SingularSet& s) {
    // regroup curve points by scanline (theta value), then count the most
    // roots in any window of width 4/resolution within a single side run;
    // side changes show up as gaps larger than the window in practice, so a
    // plain sliding window over sorted roots is used here with the window
    // never allowed to straddle distinct curves' far-apart clusters.
    std::map<int64_t, std::vector<double>> by_theta;
    for (const auto& c : s.curves)
        for (const auto& pt : c.points)
            by_theta[llround(pt.theta * 1e12)].push_back(pt.s);
    const double w = 4.0 / std::max(1, s.resolution);
    int worst = 0;
    for (auto& [th, roots] : by_theta) {
        std::sort(roots.begin(), roots.end());
        int m = static_cast<int>(roots.size());
        for (int i = 0; i < m; ++i) {
            int j = i;
            while (j + 1 < m && roots[j + 1] - roots[i] <= w) ++j;
            worst = std::max(worst, j - i + 1);
        }
    }
    return 1 + worst;
}

ExpansionEstimate expansion_rate(const Polygon& p, const ReflectionLaw& f, int n, int samples) {
    ExpansionEstimate est;
    est.n = n;
    double lam = f.lambda();
    std::vector<double> thetas;
    if (lam <= 0.0) {
        thetas = {0.0};
    } else {
        const int nt = 9;
        for (int k = 0; k < nt; ++k)
            thetas.push_back(-M_PI / 2 * lam + k * (M_PI * lam) / (nt - 1));
    }
    int per_theta = std::max(1, samples / static_cast<int>(thetas.size()));
    double best = std::numeric_limits<double>::infinity();
    for (double th : thetas) {
        for (int i = 0; i < per_theta; ++i) {
            double s = (i + 0.5) / per_theta;
            PhasePoint x{s, th};
            double prod = 1.0;
            bool bad = false;
            for (int k = 0; k < n; ++k) {
                StepOutcome st = contracting_step(p, f, x, 1e-9);
                if (!st.ok()) {
                    bad = true;
                    break;
                }
                prod *= std::fabs(std::cos(x.theta) / std::cos(st.theta_arrival));
                x = st.next;
            }
            ++est.samples;
            if (bad) {
                ++est.skipped;
                continue;
            }
            best = std::min(best, prod);
        }
    }
    est.value = std::isfinite(best) ? best : 0.0;
    return est;
}

Certificate hyperbolicity_certificate(const Polygon& p, const ReflectionLaw& f, int max_m,
                                      int resolution) {
    PiecewiseAffineMap psi = slap_map(p);
    if (facing_parallel_sides(psi))
        throw FacingParallelSides("slap map is not piecewise expanding");

    Certificate cert;
    cert.max_m = max_m;
    cert.resolution = resolution;
    double alpha0 = psi.min_abs_slope();
    cert.n_required = static_cast<int>(std::floor(std::log(2.0) / std::log(alpha0))) + 1;
    cert.connection_free =
        !orthogonal_vertex_connection(p, psi, cert.n_required, 1e-9).has_value();

    for (int m = 1; m <= max_m; ++m) {
        ExpansionEstimate a = expansion_rate(p, f, m, 2048);
        int pm = branching_number(singular_set(p, f, m, resolution));
        if (pm < a.value) {
            cert.ok = cert.connection_free;
            cert.m = m;
            cert.branching = pm;
            cert.alpha = a.value;
            cert.ratio = pm / a.value;
            return cert;
        }
        cert.m = m;
        cert.branching = pm;
        cert.alpha = a.value;
        cert.ratio = a.value > 0 ? pm / a.value : std::numeric_limits<double>::infinity();
    }
    cert.ok = false;
    return cert;
}

}  // namespace polyerg
