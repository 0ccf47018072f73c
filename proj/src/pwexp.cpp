#include "polyerg/pwexp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>

namespace polyerg {

namespace {
constexpr double kEdgeTol = 1e-14;  // matrix entries below this carry no edge
}

UlamModel build_ulam(const PiecewiseAffineMap& map, int n_bins, bool allow_nonexpanding) {
    if (!allow_nonexpanding && !map.piecewise_expanding())
        throw NotExpanding("piecewise expanding map required (|slope| > 1 on every branch)");
    UlamModel u;
    u.n_bins = n_bins;
    u.rows.assign(n_bins, {});
    const double h = 1.0 / n_bins;

    auto deposit = [&](std::vector<std::pair<int, double>>& row, double lo, double hi,
                       double mass) {
        // spread mass uniformly over [lo, hi) in [0,1)
        if (hi - lo < 1e-18) {
            int j = std::min(n_bins - 1, static_cast<int>(lo * n_bins));
            row.emplace_back(j, mass);
            return;
        }
        int j0 = static_cast<int>(std::floor(lo * n_bins));
        int j1 = static_cast<int>(std::ceil(hi * n_bins)) - 1;
        j1 = std::min(j1, n_bins - 1);
        for (int j = std::max(0, j0); j <= j1; ++j) {
            double ov = std::min(hi, (j + 1) * h) - std::max(lo, j * h);
            if (ov > 0) row.emplace_back(j, mass * ov / (hi - lo));
        }
    };

    for (const auto& br : map.branches) {
        int i0 = static_cast<int>(std::floor(br.a * n_bins));
        int i1 = static_cast<int>(std::ceil(br.b * n_bins)) - 1;
        i1 = std::min(i1, n_bins - 1);
        for (int i = std::max(0, i0); i <= i1; ++i) {
            double c = std::max(br.a, i * h);
            double dd = std::min(br.b, (i + 1) * h);
            if (dd - c <= 0) continue;
            double y1 = br.raw(c), y2 = br.raw(dd);
            double lo = std::min(y1, y2), hi = std::max(y1, y2);
            double shift = std::floor(lo);
            lo -= shift;
            hi -= shift;
            double mass = (dd - c) * n_bins;  // fraction of bin i covered
            double total = hi - lo;
            if (hi <= 1.0 || total < 1e-18) {
                deposit(u.rows[i], lo, std::min(hi, 1.0), mass);
            } else {
                deposit(u.rows[i], lo, 1.0, mass * (1.0 - lo) / total);
                deposit(u.rows[i], 0.0, hi - 1.0, mass * (hi - 1.0) / total);
            }
        }
    }

    // combine duplicate column entries and renormalize each row to sum 1
    for (auto& row : u.rows) {
        std::sort(row.begin(), row.end());
        std::vector<std::pair<int, double>> merged;
        for (auto& e : row) {
            if (!merged.empty() && merged.back().first == e.first)
                merged.back().second += e.second;
            else
                merged.push_back(e);
        }
        double sum = 0.0;
        for (auto& e : merged) sum += e.second;
        if (sum > 0)
            for (auto& e : merged) e.second /= sum;
        // drop rounding-noise entries (images spilling ~1 ulp past a bin edge)
        std::erase_if(merged, [](const std::pair<int, double>& e) { return e.second < 1e-12; });
        sum = 0.0;
        for (auto& e : merged) sum += e.second;
        if (sum > 0)
            for (auto& e : merged) e.second /= sum;
        row = std::move(merged);
    }
    return u;
}

double pushforward_residual(const UlamModel& ulam, const std::vector<double>& mass) {
    std::vector<double> out(ulam.n_bins, 0.0);
    for (int i = 0; i < ulam.n_bins; ++i)
        for (auto& [j, p] : ulam.rows[i]) out[j] += mass[i] * p;
    double r = 0.0;
    for (int j = 0; j < ulam.n_bins; ++j) r += std::fabs(out[j] - mass[j]);
    return r;
}

namespace {

// Iterative Tarjan SCC; returns component id per node, ids in reverse
// topological order of the condensation.
std::vector<int> tarjan_scc(const UlamModel& u, int& n_comp) {
    const int n = u.n_bins;
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<int> stack;
    int next_index = 0;
    n_comp = 0;

    struct Frame {
        int v;
        size_t ei;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> call;
        call.push_back({root, 0});
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            int v = f.v;
            bool descended = false;
            while (f.ei < u.rows[v].size()) {
                auto [w, p] = u.rows[v][f.ei];
                ++f.ei;
                if (p <= kEdgeTol) continue;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.push_back({w, 0});
                    descended = true;
                    break;
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                while (true) {
                    int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = n_comp;
                    if (w == v) break;
                }
                ++n_comp;
            }
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
    }
    return comp;
}

// BFS levels within the closed class; returns the graph period (gcd of
// cycle-length defects).
int class_levels(const UlamModel& u, const std::vector<int>& nodes,
                 const std::vector<int>& node_pos, std::vector<int>& level) {
    const int m = static_cast<int>(nodes.size());
    level.assign(m, -1);
    std::vector<int> queue = {0};
    level[0] = 0;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int v = queue[qi];
        for (auto& [w, p] : u.rows[nodes[v]]) {
            if (p <= kEdgeTol) continue;
            int lw = node_pos[w];
            if (lw < 0) continue;
            if (level[lw] == -1) {
                level[lw] = level[v] + 1;
                queue.push_back(lw);
            }
        }
    }
    long g = 0;
    for (int v = 0; v < m; ++v) {
        if (level[v] == -1) continue;
        for (auto& [w, p] : u.rows[nodes[v]]) {
            if (p <= kEdgeTol) continue;
            int lw = node_pos[w];
            if (lw < 0 || level[lw] == -1) continue;
            g = std::gcd(g, static_cast<long>(level[v] + 1 - level[lw]));
        }
    }
    return g == 0 ? 1 : static_cast<int>(std::labs(g));
}

// one class-restricted pushforward, indexed within the class
void push_once(const UlamModel& u, const std::vector<int>& nodes,
               const std::vector<int>& node_pos, const std::vector<double>& v,
               std::vector<double>& out) {
    const int m = static_cast<int>(nodes.size());
    out.assign(m, 0.0);
    for (int a = 0; a < m; ++a) {
        double va = v[a];
        if (va == 0.0) continue;
        for (auto& [w, p] : u.rows[nodes[a]]) {
            int b = node_pos[w];
            if (b >= 0) out[b] += va * p;
        }
    }
}

// in-place Gaussian elimination with partial pivoting; A is row-major n x n
std::vector<double> gauss_solve(std::vector<double> A, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(A[r * n + c]) > std::fabs(A[piv * n + c])) piv = r;
        if (std::fabs(A[piv * n + c]) < 1e-14) throw EigSolveFailure("singular linear system");
        if (piv != c) {
            for (int k = 0; k < n; ++k) std::swap(A[piv * n + k], A[c * n + k]);
            std::swap(b[piv], b[c]);
        }
        for (int r = c + 1; r < n; ++r) {
            double f = A[r * n + c] / A[c * n + c];
            if (f == 0.0) continue;
            for (int k = c; k < n; ++k) A[r * n + k] -= f * A[c * n + k];
            b[r] -= f * b[c];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
        x[r] = s / A[r * n + r];
    }
    return x;
}

std::vector<double> stationary_mass(const UlamModel& u, const std::vector<int>& nodes,
                                    const std::vector<int>& node_pos,
                                    const std::vector<int>& level, int period, double tol_eig,
                                    int max_iter) {
    const int m = static_cast<int>(nodes.size());

    // count the first cyclic component and the class edge weight
    std::vector<int> comp0;
    long nnz = 0;
    for (int a = 0; a < m; ++a) {
        if (level[a] >= 0 && level[a] % period == 0) comp0.push_back(a);
        nnz += static_cast<long>(u.rows[nodes[a]].size());
    }
    const int m0 = static_cast<int>(comp0.size());

    // small cyclic components: solve the period-step chain on one component
    // directly, then propagate around the cycle. This sidesteps the slow
    // mixing of nearly-marginal maps that stalls power iteration.
    if (m0 > 0 && m0 <= 512 &&
        static_cast<long>(m0) * period * (nnz / std::max(1, m)) * 4 < 50000000L) {
        std::vector<int> pos0(m, -1);
        for (int c = 0; c < m0; ++c) pos0[comp0[c]] = c;
        std::vector<double> T(static_cast<size_t>(m0) * m0, 0.0);
        std::vector<double> e(m), tmp;
        for (int c = 0; c < m0; ++c) {
            std::fill(e.begin(), e.end(), 0.0);
            e[comp0[c]] = 1.0;
            for (int k = 0; k < period; ++k) {
                push_once(u, nodes, node_pos, e, tmp);
                std::swap(e, tmp);
            }
            for (int a = 0; a < m; ++a)
                if (e[a] != 0.0 && pos0[a] >= 0) T[static_cast<size_t>(pos0[a]) * m0 + c] += e[a];
        }
        // stationary x of T (column-stochastic layout above): (T - I) x = 0,
        // with the first equation replaced by the normalization sum x = 1
        std::vector<double> A(static_cast<size_t>(m0) * m0, 0.0), b(m0, 0.0);
        for (int r = 0; r < m0; ++r)
            for (int c = 0; c < m0; ++c)
                A[static_cast<size_t>(r) * m0 + c] = T[static_cast<size_t>(r) * m0 + c] -
                                                     (r == c ? 1.0 : 0.0);
        for (int c = 0; c < m0; ++c) A[c] = 1.0;
        b[0] = 1.0;
        std::vector<double> x = gauss_solve(std::move(A), std::move(b));

        std::vector<double> v(m, 0.0);
        std::vector<double> cur(m, 0.0);
        for (int c = 0; c < m0; ++c) cur[comp0[c]] = std::max(0.0, x[c]);
        double s0 = 0.0;
        for (double w : cur) s0 += w;
        for (auto& w : cur) w /= s0 * period;
        for (int a = 0; a < m; ++a) v[a] += cur[a];
        for (int k = 1; k < period; ++k) {
            push_once(u, nodes, node_pos, cur, tmp);
            double s = 0.0;
            for (double w : tmp) s += w;
            for (auto& w : tmp) w /= s * period;
            std::swap(cur, tmp);
            for (int a = 0; a < m; ++a) v[a] += cur[a];
        }
        return v;
    }

    // lazy power iteration: (P + I)/2 keeps the stationary vector and is
    // aperiodic, so it converges for any graph period
    std::vector<double> v(m, 1.0 / m), next(m);
    double delta = 1.0;
    for (int it = 0; it < max_iter && delta > tol_eig; ++it) {
        push_once(u, nodes, node_pos, v, next);
        delta = 0.0;
        double sum = 0.0;
        for (int a = 0; a < m; ++a) {
            next[a] = 0.5 * (next[a] + v[a]);
            sum += next[a];
        }
        for (int a = 0; a < m; ++a) {
            next[a] /= sum;
            delta += std::fabs(next[a] - v[a]);
        }
        std::swap(v, next);
    }
    if (delta > tol_eig) {
        std::vector<double> img;
        push_once(u, nodes, node_pos, v, img);
        double res = 0.0;
        for (int a = 0; a < m; ++a) res += std::fabs(img[a] - v[a]);
        if (res > 1e-6) throw EigSolveFailure("power iteration did not converge");
    }
    return v;
}

std::vector<Interval> bins_to_intervals(const std::vector<int>& bins, int n_bins) {
    std::vector<Interval> out;
    const double h = 1.0 / n_bins;
    for (size_t i = 0; i < bins.size();) {
        size_t j = i;
        while (j + 1 < bins.size() && bins[j + 1] == bins[j] + 1) ++j;
        out.push_back({bins[i] * h, (bins[j] + 1) * h});
        i = j + 1;
    }
    // merge across the wrap point when both ends touch it
    if (out.size() >= 2 && out.front().a == 0.0 && std::fabs(out.back().b - 1.0) < 1e-15) {
        out.back().b = 1.0 + out.front().b;
        out.erase(out.begin());
    }
    return out;
}

}  // namespace

ErgodicDecomposition ergodic_decomposition(const PiecewiseAffineMap& map, int n_bins,
                                           bool allow_nonexpanding, double density_floor_scale,
                                           double tol_eig, int max_iter) {
    UlamModel u = build_ulam(map, n_bins, allow_nonexpanding);
    int n_comp = 0;
    std::vector<int> comp = tarjan_scc(u, n_comp);

    std::vector<bool> has_exit(n_comp, false);
    std::vector<std::vector<int>> members(n_comp);
    for (int v = 0; v < n_bins; ++v) {
        members[comp[v]].push_back(v);
        for (auto& [w, p] : u.rows[v])
            if (p > kEdgeTol && comp[w] != comp[v]) has_exit[comp[v]] = true;
    }

    std::vector<std::vector<int>> classes;
    for (int c = 0; c < n_comp; ++c) {
        if (has_exit[c]) continue;
        std::sort(members[c].begin(), members[c].end());
        classes.push_back(members[c]);
    }
    std::sort(classes.begin(), classes.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) {
                  return a.front() < b.front();
              });

    ErgodicDecomposition dec;
    dec.n_bins = n_bins;
    std::vector<int> node_pos(n_bins, -1);
    for (const auto& nodes : classes) {
        std::fill(node_pos.begin(), node_pos.end(), -1);
        for (size_t a = 0; a < nodes.size(); ++a) node_pos[nodes[a]] = static_cast<int>(a);

        Acip acip;
        std::vector<int> level;
        acip.mixing_period = class_levels(u, nodes, node_pos, level);
        std::vector<double> pi =
            stationary_mass(u, nodes, node_pos, level, acip.mixing_period, tol_eig, max_iter);

        acip.density.assign(n_bins, 0.0);
        const double floor_mass = density_floor_scale / n_bins;
        for (size_t a = 0; a < nodes.size(); ++a) {
            acip.mass += pi[a];
            acip.density[nodes[a]] = pi[a] * n_bins;
            if (pi[a] > floor_mass) acip.bins.push_back(nodes[a]);
        }
        acip.support = bins_to_intervals(acip.bins, n_bins);

        // cyclic components via BFS levels mod period
        const int k = acip.mixing_period;
        acip.components.assign(k, {});
        for (size_t a = 0; a < nodes.size(); ++a)
            if (level[a] >= 0 && pi[a] > floor_mass)
                acip.components[level[a] % k].push_back(nodes[a]);
        for (auto& cc : acip.components) std::sort(cc.begin(), cc.end());

        dec.acips.push_back(std::move(acip));
    }
    return dec;
}

namespace {

double interval_overlap(const Interval& p, const Interval& q) {
    // overlap on the circle; intervals may extend past 1
    double best = 0.0;
    for (int sp = -1; sp <= 1; ++sp) {
        double lo = std::max(p.a + sp, q.a);
        double hi = std::min(p.b + sp, q.b);
        best = std::max(best, hi - lo);
    }
    return best;
}

double support_overlap(const Acip& x, const Acip& y) {
    double tot = 0.0;
    for (const auto& p : x.support)
        for (const auto& q : y.support) tot += std::max(0.0, interval_overlap(p, q));
    return tot;
}

}  // namespace

void check_support_stability(const PiecewiseAffineMap& map, int n_bins, double max_drift_bins) {
    ErgodicDecomposition coarse = ergodic_decomposition(map, n_bins);
    ErgodicDecomposition fine = ergodic_decomposition(map, 2 * n_bins);
    if (coarse.acips.size() != fine.acips.size())
        throw AmbiguousSupport("acip count changes under bin refinement");
    const double drift = max_drift_bins / n_bins;
    for (const auto& a : coarse.acips) {
        // match by largest support overlap
        const Acip* best = nullptr;
        double bestov = -1.0;
        for (const auto& b : fine.acips) {
            double ov = support_overlap(a, b);
            if (ov > bestov) {
                bestov = ov;
                best = &b;
            }
        }
        if (!best || a.support.size() != best->support.size())
            throw AmbiguousSupport("support interval count changes under bin refinement");
        for (const auto& p : a.support) {
            double err = std::numeric_limits<double>::infinity();
            for (const auto& q : best->support)
                err = std::min(err, std::max(circ_dist(p.a, q.a), circ_dist(p.b, q.b)));
            if (err > drift) throw AmbiguousSupport("support endpoint drifts under refinement");
        }
    }
}

namespace {

struct Word {
    int depth;
    double A, C;       // x -> A x + C maps start x into [0,1) on [xlo, xhi]
    double xlo, xhi;
};

}  // namespace

std::vector<PeriodicPoint> periodic_points(const PiecewiseAffineMap& map, int max_period,
                                           long node_budget) {
    long nodes = 0;
    // raw fixed points of words: x -> (period, multiplier)
    std::map<int64_t, PeriodicPoint> found;

    std::vector<Word> stack;
    stack.push_back({0, 1.0, 0.0, 0.0, 1.0});
    while (!stack.empty()) {
        Word w = stack.back();
        stack.pop_back();
        if (w.depth >= 1) {
            if (std::fabs(w.A - 1.0) > 1e-12) {
                double xs = w.C / (1.0 - w.A);
                if (xs >= w.xlo - 1e-13 && xs <= w.xhi + 1e-13 && xs >= 0.0 && xs < 1.0) {
                    // key is circular: x = 1 - ulp and x = 0 are the same point
                    int64_t key = llround(xs * 1e9) % 1000000000;
                    auto it = found.find(key);
                    if (it == found.end() || w.depth < it->second.period) {
                        PeriodicPoint pp;
                        pp.x = xs;
                        pp.period = w.depth;
                        pp.multiplier = w.A;
                        found[key] = pp;
                    }
                }
            }
        }
        if (w.depth == max_period) continue;
        double ylo = w.A * w.xlo + w.C, yhi = w.A * w.xhi + w.C;
        if (ylo > yhi) std::swap(ylo, yhi);
        for (const auto& br : map.branches) {
            double c = std::max(ylo, br.a), d = std::min(yhi, br.b);
            if (d - c <= 1e-15) continue;
            // image of [c,d) under the branch, then split at integers
            double m1 = br.raw(c), m2 = br.raw(d);
            if (m1 > m2) std::swap(m1, m2);
            double A2 = br.slope * w.A;
            double C2 = br.slope * w.C + br.intercept;
            for (int shift = static_cast<int>(std::floor(m1));
                 shift <= static_cast<int>(std::floor(m2 - 1e-15)); ++shift) {
                double zlo = std::max(m1, static_cast<double>(shift));
                double zhi = std::min(m2, shift + 1.0);
                if (zhi - zlo <= 1e-15) continue;
                // pull the z-window back to start coordinates
                double t1 = (zlo - C2) / A2, t2 = (zhi - C2) / A2;
                if (t1 > t2) std::swap(t1, t2);
                if (++nodes > node_budget) throw WordExplosion("periodic word tree too large");
                stack.push_back({w.depth + 1, A2, C2 - shift, std::max(t1, w.xlo),
                                 std::min(t2, w.xhi)});
            }
        }
    }

    // group raw points into cycles and keep one representative per cycle
    std::vector<PeriodicPoint> raw;
    for (auto& [k, pp] : found) raw.push_back(pp);
    std::sort(raw.begin(), raw.end(), [](const PeriodicPoint& a, const PeriodicPoint& b) {
        return a.period != b.period ? a.period < b.period : a.x < b.x;
    });
    std::vector<bool> used(raw.size(), false);
    auto index_near = [&](double x) {
        for (size_t i = 0; i < raw.size(); ++i)
            if (circ_dist(raw[i].x, x) < 1e-9) return static_cast<int>(i);
        return -1;
    };
    std::vector<PeriodicPoint> cycles;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        PeriodicPoint rep = raw[i];
        rep.orbit = {raw[i].x};
        used[i] = true;
        double x = raw[i].x;
        for (int k = 1; k < rep.period; ++k) {
            x = map.eval_right(x);
            int j = index_near(x);
            if (j >= 0) used[j] = true;
            rep.orbit.push_back(x);
        }
        rep.x = *std::min_element(rep.orbit.begin(), rep.orbit.end());
        cycles.push_back(rep);
    }
    return cycles;
}

std::vector<DensityGap> density_of_periodic_points(const ErgodicDecomposition& dec,
                                                   const std::vector<PeriodicPoint>& pts,
                                                   double min_len) {
    std::vector<DensityGap> gaps;
    for (size_t ai = 0; ai < dec.acips.size(); ++ai) {
        for (const auto& iv : dec.acips[ai].support) {
            if (iv.length() < min_len) continue;
            bool hit = false;
            for (const auto& pp : pts) {
                for (double x : pp.orbit)
                    if (iv.contains(x)) {
                        hit = true;
                        break;
                    }
                if (hit) break;
            }
            if (!hit) gaps.push_back({static_cast<int>(ai), iv});
        }
    }
    return gaps;
}

BoundaryStructure boundary_segments(const PiecewiseAffineMap& map, const Acip& acip,
                                    double tol, int max_len) {
    BoundaryStructure bs;
    double covered = 0.0;
    for (const auto& iv : acip.support) covered += iv.length();
    if (covered >= 1.0 - tol) return bs;  // full-circle support has no boundary
    for (const auto& iv : acip.support) {
        bs.endpoint.push_back(wrap01(iv.a));
        bs.endpoint.push_back(wrap01(iv.b));
    }
    bs.order.assign(bs.endpoint.size(), -1);
    if (bs.endpoint.empty()) return bs;  // full-circle support has no boundary

    auto near_endpoint = [&](double x) {
        for (size_t e = 0; e < bs.endpoint.size(); ++e)
            if (circ_dist(x, bs.endpoint[e]) < tol) return static_cast<int>(e);
        return -1;
    };
    auto in_interior = [&](double x) {
        if (near_endpoint(x) >= 0) return false;
        for (const auto& iv : acip.support)
            if (iv.contains(x)) return true;
        return false;
    };

    for (double x0 : map.discontinuities) {
        if (!in_interior(x0)) continue;
        struct Path {
            std::vector<double> pts;
        };
        std::vector<Path> active = {{{x0}}};
        std::vector<Path> done;
        for (int step = 1; step <= max_len && !active.empty(); ++step) {
            std::vector<Path> next;
            for (auto& pa : active) {
                for (double v : map.limits(pa.pts.back())) {
                    Path ext = pa;
                    ext.pts.push_back(v);
                    bool revisit = false;
                    for (size_t q = 0; q + 1 < ext.pts.size(); ++q)
                        if (circ_dist(ext.pts[q], v) < tol) revisit = true;
                    if (revisit) {
                        done.push_back(ext);
                    } else if (near_endpoint(v) >= 0) {
                        next.push_back(ext);
                    } else {
                        done.push_back(ext);  // left the boundary (open segment)
                    }
                }
            }
            if (next.size() > 10000) throw DepthExplosion("boundary segment tree too large");
            active = std::move(next);
        }
        for (auto& pa : active) done.push_back(pa);
        for (auto& pa : done) {
            BoundarySegment seg;
            seg.points = pa.pts;
            double last = pa.pts.back();
            for (size_t q = 0; q + 1 < pa.pts.size(); ++q)
                if (circ_dist(pa.pts[q], last) < tol) seg.closes = true;
            bs.segments.push_back(seg);
        }
    }

    for (const auto& seg : bs.segments) {
        for (size_t pos = 0; pos < seg.points.size(); ++pos) {
            int e = near_endpoint(seg.points[pos]);
            if (e >= 0) bs.order[e] = std::max(bs.order[e], static_cast<int>(pos));
        }
    }
    for (size_t e = 0; e < bs.endpoint.size(); ++e)
        if (bs.order[e] < 0)
            throw UnresolvedBoundary("support endpoint not reached by any boundary segment");
    return bs;
}

}  // namespace polyerg
