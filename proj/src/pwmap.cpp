#include "polyerg/pwmap.hpp"

#include <algorithm>
#include <limits>

namespace polyerg {

namespace {
constexpr double kJumpTol = 1e-12;
}

void PiecewiseAffineMap::finalize() {
    std::sort(branches.begin(), branches.end(),
              [](const AffineBranch& p, const AffineBranch& q) { return p.a < q.a; });
    discontinuities.clear();
    const int n = static_cast<int>(branches.size());
    for (int i = 0; i < n; ++i) {
        const AffineBranch& cur = branches[i];
        bool boundary = (i == 0);
        if (boundary && !circle) continue;
        const AffineBranch& prev = branches[(i + n - 1) % n];
        double x = cur.a;
        // left limit comes from prev at its right end, right limit from cur
        double left = prev.value(prev.b);
        double right = cur.value(cur.a);
        double gap = circle ? circ_dist(left, right) : std::fabs(left - right);
        bool turning = prev.slope * cur.slope < 0.0;
        if (gap > kJumpTol || turning) discontinuities.push_back(x);
    }
}

int PiecewiseAffineMap::branch_right_of(double x) const {
    x = wrap01(x);
    int lo = 0, hi = static_cast<int>(branches.size()) - 1;
    while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        if (branches[mid].a <= x)
            lo = mid;
        else
            hi = mid - 1;
    }
    return lo;
}

int PiecewiseAffineMap::branch_left_of(double x) const {
    x = wrap01(x);
    int i = branch_right_of(x);
    if (x == branches[i].a) {
        int n = static_cast<int>(branches.size());
        i = (i + n - 1) % n;  // wraps: x == 0 takes the limit from below 1
    }
    return i;
}

double PiecewiseAffineMap::eval_right(double x) const {
    const AffineBranch& b = branches[branch_right_of(x)];
    return b.value(wrap01(x));
}

double PiecewiseAffineMap::eval_left(double x) const {
    x = wrap01(x);
    int i = branch_right_of(x);
    if (x > branches[i].a) return branches[i].value(x);
    // x sits at a branch start: take the limit from the branch ending there
    int n = static_cast<int>(branches.size());
    if (!circle && i == 0) return branches[0].value(x);
    const AffineBranch& p = branches[(i + n - 1) % n];
    return p.value(p.b);
}

std::vector<double> PiecewiseAffineMap::limits(double x) const {
    double l = eval_left(x);
    double r = eval_right(x);
    double gap = circle ? circ_dist(l, r) : std::fabs(l - r);
    if (gap <= kJumpTol) return {r};
    return {l, r};
}

double PiecewiseAffineMap::min_abs_slope() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& b : branches) m = std::min(m, std::fabs(b.slope));
    return m;
}

double PiecewiseAffineMap::max_abs_slope() const {
    double m = 0.0;
    for (const auto& b : branches) m = std::max(m, std::fabs(b.slope));
    return m;
}

bool PiecewiseAffineMap::piecewise_expanding(double tol) const {
    return min_abs_slope() > 1.0 + tol;
}

SetValuedOrbit set_valued_orbit(const PiecewiseAffineMap& map, double x, int depth,
                                int max_level_size) {
    SetValuedOrbit orb;
    orb.root = wrap01(x);
    std::vector<double> cur = {orb.root};
    for (int n = 0; n < depth; ++n) {
        std::vector<double> next;
        for (double p : cur)
            for (double v : map.limits(p)) next.push_back(v);
        std::sort(next.begin(), next.end());
        std::vector<double> dedup;
        for (double v : next) {
            bool dup = !dedup.empty() && std::fabs(v - dedup.back()) < 1e-12;
            if (map.circle && !dedup.empty())
                dup = dup || circ_dist(v, dedup.front()) < 1e-12;
            if (!dup) dedup.push_back(v);
        }
        if (static_cast<int>(dedup.size()) > max_level_size)
            throw DepthExplosion("set-valued orbit level exceeded cap");
        orb.levels.push_back(dedup);
        cur = std::move(dedup);
    }
    return orb;
}

}  // namespace polyerg
