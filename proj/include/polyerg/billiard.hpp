#pragma once

#include <functional>
#include <optional>

#include "polyerg/geometry.hpp"
#include "polyerg/pwmap.hpp"

namespace polyerg {

/// Reflection law theta' -> f(theta'), f(0) = 0, |f'| <= lambda < 1 for
/// contracting laws. lambda = 0 recovers the slap law, lambda = 1 specular.
class ReflectionLaw {
public:
    enum class Kind { Specular, Slap, Linear, Custom };

    static ReflectionLaw specular();
    static ReflectionLaw slap();
    static ReflectionLaw linear(double sigma);  // f(t) = sigma * t
    static ReflectionLaw custom(std::function<double(double)> f,
                                std::function<double(double)> fp, double lambda);

    double value(double t) const { return f_(t); }
    double derivative(double t) const { return fp_(t); }
    double lambda() const { return lambda_; }
    Kind kind() const { return kind_; }
    double sigma() const { return sigma_; }

private:
    Kind kind_ = Kind::Linear;
    double sigma_ = 0.0;
    double lambda_ = 0.0;
    std::function<double(double)> f_;
    std::function<double(double)> fp_;
};

/// One bounce of the billiard flow. theta_arrival is the incidence angle at
/// the landing point before the reflection law is applied.
struct StepOutcome {
    enum class Status { Ok, VertexHit, Tangency, SourceAtVertex };
    Status status = Status::Ok;
    PhasePoint next;            // (s', f(theta')) for contracting_step
    double theta_arrival = 0.0; // theta'
    double chord = 0.0;         // free-path length t (perimeter units)
    int side_from = -1;
    int side_to = -1;
    bool ok() const { return status == Status::Ok; }
};

/// Free flight from x in direction cos(theta) n + sin(theta) u, specular
/// bookkeeping only (next.theta = theta_arrival).
StepOutcome billiard_step(const Polygon& p, PhasePoint x,
                          double eps_vertex = Polygon::kDefaultEpsVertex);

/// Free flight followed by the reflection law: next.theta = f(theta').
StepOutcome contracting_step(const Polygon& p, const ReflectionLaw& f, PhasePoint x,
                             double eps_vertex = Polygon::kDefaultEpsVertex);

struct Jacobian2 {
    double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
    double det() const { return a11 * a22 - a12 * a21; }
};

/// Derivative of the contracted billiard map at x:
///   -[[cos(theta)/cos(theta'), t/cos(theta')], [0, f'(theta')]].
/// Throws SingularPoint when the step is singular.
Jacobian2 dphi(const Polygon& p, const ReflectionLaw& f, PhasePoint x,
               double eps_vertex = Polygon::kDefaultEpsVertex);

struct Orbit {
    std::vector<PhasePoint> points;  // x_0 .. x_k
    bool truncated = false;          // stopped near the singular set
    StepOutcome::Status stop_reason = StepOutcome::Status::Ok;
};

Orbit orbit(const Polygon& p, const ReflectionLaw& f, PhasePoint x0, int n_steps,
            double eps_singular = 1e-8);

/// Point on a singular curve of Phi^n: the depth-th landing crosses a vertex.
struct SingularCurve {
    int depth = 1;                      // iterate at which the vertex is hit
    std::vector<PhasePoint> points;     // polyline along increasing theta
};

struct SingularSet {
    int n = 1;
    int resolution = 0;
    std::vector<SingularCurve> curves;
};

/// S_n^+ estimated by theta-scanlines: for each scanline the s-roots where
/// some landing within n steps crosses a vertex, refined by bisection to
/// 1e-12 and chained into curves across scanlines.
SingularSet singular_set(const Polygon& p, const ReflectionLaw& f, int n,
                         int resolution = 2048);

/// Branching number p(S_n^+): 1 + the largest number of singular roots found
/// in any short horizontal window that stays inside a single side.
int branching_number(const SingularSet& s);

struct ExpansionEstimate {
    double value = 0.0;  // min over sampled orbits of prod |cos t / cos t'|
    int n = 1;
    int samples = 0;
    int skipped = 0;     // orbits dropped near the singular set
};

/// Lower estimate of the n-step horizontal expansion alpha(Phi^n), sampled
/// over the attractor strip |theta| <= (pi/2) lambda(f).
ExpansionEstimate expansion_rate(const Polygon& p, const ReflectionLaw& f, int n,
                                 int samples = 4096);

struct Certificate {
    bool ok = false;
    int m = 0;             // iterate at which p(S_m^+) < alpha(Phi^m)
    int branching = 0;
    double alpha = 0.0;
    double ratio = 0.0;    // branching / alpha
    int n_required = 0;    // steps needed for the vertex-connection check
    bool connection_free = false;
    int max_m = 0;
    int resolution = 0;
};

/// Searches m = 1..max_m for p(S_m^+) < alpha(Phi^m) and checks the absence
/// of short orthogonal vertex connections. ok = false when max_m is
/// exhausted. Throws FacingParallelSides when the slap map is not expanding.
Certificate hyperbolicity_certificate(const Polygon& p, const ReflectionLaw& f,
                                      int max_m = 8, int resolution = 512);

}  // namespace polyerg
