#include "polyerg/slapmap.hpp"

#include <algorithm>
#include <limits>

namespace polyerg {

PiecewiseAffineMap slap_map(const Polygon& poly) {
    const int d = poly.num_sides();
    PiecewiseAffineMap psi;
    psi.circle = true;

    for (int i = 0; i < d; ++i) {
        const double si = poly.side_breaks[i];
        const double len = poly.sides[i].length;
        const Vec2 ui = poly.sides[i].tangent;
        const Vec2 ni = poly.sides[i].normal;
        const Vec2 vi = poly.vertices[i];

        // branch breakpoints: orthogonal projections of vertices onto side i
        std::vector<double> cuts = {0.0, len};
        for (int j = 0; j < d; ++j) {
            if (j == i || j == (i + 1) % d) continue;
            Vec2 w = poly.vertices[j] - vi;
            if (w.dot(ni) <= 0.0) continue;  // vertex not in front of side i
            double x = w.dot(ui);
            if (x > 1e-14 && x < len - 1e-14) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());

        for (size_t c = 0; c + 1 < cuts.size(); ++c) {
            double xa = cuts[c], xb = cuts[c + 1];
            if (xb - xa < 1e-14) continue;
            double xm = 0.5 * (xa + xb);
            RayHit hit = first_boundary_hit(poly, vi + ui * xm, ni, i);
            if (hit.side < 0) throw DegenerateEdge("normal chord found no target side");
            int j = hit.side;
            double dotu = ui.dot(poly.sides[j].tangent);
            AffineBranch br;
            br.a = si + xa;
            br.b = si + xb;
            br.slope = 1.0 / dotu;
            br.intercept =
                poly.side_breaks[j] + ((vi - poly.vertices[j]).cross(ni) - si) / dotu;
            br.target_side = j;

            // merge with the previous branch when the affine data agrees
            if (!psi.branches.empty()) {
                AffineBranch& prev = psi.branches.back();
                if (prev.target_side == br.target_side && std::fabs(prev.b - br.a) < 1e-15 &&
                    std::fabs(prev.slope - br.slope) < 1e-12 &&
                    std::fabs(prev.intercept - br.intercept) < 1e-12) {
                    prev.b = br.b;
                    continue;
                }
            }
            psi.branches.push_back(br);
        }
    }
    if (!psi.branches.empty()) psi.branches.back().b = 1.0;
    psi.finalize();
    return psi;
}

std::vector<FixedVertexCheck> acute_vertices_fixed(const Polygon& p,
                                                   const PiecewiseAffineMap& psi, double tol) {
    std::vector<FixedVertexCheck> out;
    for (int k = 0; k < p.num_sides(); ++k) {
        if (p.vertex_class[k] != VertexClass::Acute) continue;
        double sk = p.side_breaks[k];
        double dl = circ_dist(psi.eval_left(sk), sk);
        double dr = circ_dist(psi.eval_right(sk), sk);
        FixedVertexCheck chk;
        chk.vertex = k;
        chk.defect = std::max(dl, dr);
        chk.fixed = chk.defect < tol;
        out.push_back(chk);
    }
    return out;
}

bool facing_parallel_sides(const PiecewiseAffineMap& psi, double tol) {
    for (const auto& b : psi.branches)
        if (std::fabs(std::fabs(b.slope) - 1.0) < tol) return true;
    return false;
}

namespace {

struct TreeNode {
    double x;
    int parent;  // index into nodes of previous level, -1 at root
};

std::vector<double> reconstruct(const std::vector<std::vector<TreeNode>>& levels, int level,
                                int idx) {
    std::vector<double> path;
    for (int l = level; l >= 0; --l) {
        path.push_back(levels[l][idx].x);
        idx = levels[l][idx].parent;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

int nearest_vertex(const Polygon& p, double x, double tol) {
    for (int m = 0; m < p.num_sides(); ++m)
        if (circ_dist(x, p.side_breaks[m]) < tol) return m;
    return -1;
}

}  // namespace

std::optional<VertexConnection> orthogonal_vertex_connection(const Polygon& p,
                                                             const PiecewiseAffineMap& psi,
                                                             int max_len, double tol) {
    const int d = p.num_sides();
    for (int k = 0; k < d; ++k) {
        std::vector<std::vector<TreeNode>> levels;
        levels.push_back({{p.side_breaks[k], -1}});
        for (int n = 1; n + 1 <= max_len; ++n) {
            std::vector<TreeNode> next;
            for (int pi = 0; pi < static_cast<int>(levels.back().size()); ++pi) {
                for (double v : psi.limits(levels.back()[pi].x)) {
                    bool dup = false;
                    for (const auto& t : next)
                        if (circ_dist(t.x, v) < 1e-12) { dup = true; break; }
                    if (!dup) next.push_back({v, pi});
                }
            }
            if (static_cast<int>(next.size()) > 4096)
                throw DepthExplosion("vertex connection search level exceeded cap");
            levels.push_back(next);
            for (int idx = 0; idx < static_cast<int>(next.size()); ++idx) {
                int m = nearest_vertex(p, next[idx].x, tol);
                if (m < 0) continue;
                bool acute_both = p.vertex_class[k] == VertexClass::Acute &&
                                  p.vertex_class[m] == VertexClass::Acute;
                // an acute vertex trivially connects to itself; skip that
                if (acute_both) continue;
                VertexConnection vc;
                vc.length = n + 1;
                vc.itinerary = reconstruct(levels, n, idx);
                vc.start_vertex = k;
                vc.end_vertex = m;
                return vc;
            }
        }
    }
    return std::nullopt;
}

std::optional<PreperiodicWitness> preperiodic_vertex(const Polygon& p,
                                                     const PiecewiseAffineMap& psi, int depth,
                                                     double tol) {
    for (int k = 0; k < p.num_sides(); ++k) {
        if (p.vertex_class[k] == VertexClass::Acute) continue;
        std::vector<std::vector<TreeNode>> levels;
        levels.push_back({{p.side_breaks[k], -1}});
        std::vector<double> seen = {p.side_breaks[k]};
        for (int n = 1; n <= depth; ++n) {
            std::vector<TreeNode> next;
            for (int pi = 0; pi < static_cast<int>(levels.back().size()); ++pi) {
                for (double v : psi.limits(levels.back()[pi].x)) {
                    bool dup = false;
                    for (const auto& t : next)
                        if (circ_dist(t.x, v) < 1e-12) { dup = true; break; }
                    if (!dup) next.push_back({v, pi});
                }
            }
            if (static_cast<int>(next.size()) > 4096)
                throw DepthExplosion("preperiodicity search level exceeded cap");
            levels.push_back(next);
            for (int idx = 0; idx < static_cast<int>(next.size()); ++idx) {
                for (double old : seen) {
                    if (circ_dist(next[idx].x, old) < tol) {
                        PreperiodicWitness w;
                        w.vertex = k;
                        w.path = reconstruct(levels, n, idx);
                        w.revisit_level = n;
                        w.revisited_point = old;
                        return w;
                    }
                }
            }
            for (const auto& t : next) seen.push_back(t.x);
        }
    }
    return std::nullopt;
}

HatPdCheck in_hat_Pd(const Polygon& p, int depth, double tol) {
    PiecewiseAffineMap psi = slap_map(p);
    HatPdCheck chk;
    chk.expanding = !facing_parallel_sides(psi);
    chk.no_orthogonal_connection = !orthogonal_vertex_connection(p, psi, depth, tol).has_value();
    chk.no_preperiodic_vertex = !preperiodic_vertex(p, psi, depth, tol).has_value();
    return chk;
}

}  // namespace polyerg
