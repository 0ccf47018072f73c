#pragma once

#include <optional>
#include <vector>

#include "polyerg/geometry.hpp"

namespace polyerg {

/// Closed arclength interval [a, b]; b may exceed 1 to denote wrap-around.
struct Interval {
    double a = 0.0;
    double b = 0.0;
    double length() const { return b - a; }
    bool contains(double x, double tol = 0.0) const {
        for (double t : {x, x + 1.0, x - 1.0})
            if (t >= a - tol && t <= b + tol) return true;
        return false;
    }
};

/// One affine branch y = slope * x + intercept on [a, b), before wrapping
/// the value into [0,1).
struct AffineBranch {
    double a = 0.0;
    double b = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    int target_side = -1;  // -1 when the map is not side-aware

    double raw(double x) const { return slope * x + intercept; }
    double value(double x) const { return wrap01(raw(x)); }
};

/// Piecewise affine map of [0,1) (optionally with 0 ~ 1 identified).
/// Branch domains partition [0,1); evaluation is left-continuous.
struct PiecewiseAffineMap {
    bool circle = true;
    std::vector<AffineBranch> branches;  // sorted by a, covering [0,1)
    std::vector<double> discontinuities;  // the set D (jumps and turning points)

    int branch_right_of(double x) const;  // branch with a <= x < b
    int branch_left_of(double x) const;   // branch with a < x <= b (wraps if circle)

    double eval(double x) const { return eval_left(x); }
    double eval_left(double x) const;
    double eval_right(double x) const;

    /// Set-valued map F(x) = {left limit, right limit}, deduplicated.
    std::vector<double> limits(double x) const;

    double min_abs_slope() const;
    double max_abs_slope() const;
    bool piecewise_expanding(double tol = 1e-10) const;

    void finalize();  // sort branches, compute D
};

struct SetValuedOrbit {
    double root = 0.0;
    std::vector<std::vector<double>> levels;  // level n = F^n(root)
};

/// Exact one-sided iteration of the set-valued map F. Throws DepthExplosion
/// if a level exceeds max_level_size.
SetValuedOrbit set_valued_orbit(const PiecewiseAffineMap& map, double x, int depth,
                                int max_level_size = 4096);

}  // namespace polyerg
