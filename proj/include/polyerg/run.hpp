#pragma once

#include <string>

#include "polyerg/billiard.hpp"
#include "polyerg/corpus.hpp"
#include "polyerg/pwexp.hpp"
#include "polyerg/slapmap.hpp"
#include "polyerg/srb.hpp"

namespace polyerg {

/// Exit codes shared by the library commands and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDiagnosed = 2;  // clean negative result
inline constexpr int kExitError = 3;      // bad input / internal failure

struct RunConfig {
    // polygon source: either an explicit vertex list or a corpus shorthand
    std::vector<Vec2> vertices;
    std::string corpus;      // "regular:7", "triangle:a,b", "kite:w,h,L",
                             // "fixture-kite", "chambers:m", "tower:n"
    double sigma = 0.0;      // linear contraction strength
    int n_bins = 1 << 14;
    int grid_nx = 64, grid_ny = 64;
    long n_transient = 10000;
    long n_sample = 100000;
    double cluster_tol = 0.1;
    int max_period = 12;
    int max_m = 8;
    int resolution = 512;
    int threads = 0;
    double match_tol = 0.05;
    double strip_pad = 0.01;
    std::string out;         // report path; empty = stdout
};

Polygon resolve_polygon(const RunConfig& cfg);
std::string config_hash(const std::string& canonical);

/// Slap-map ergodic decomposition -> JSON report.
int cmd_slap(const RunConfig& cfg);
/// SRB attractor estimate -> JSON report (deterministic for fixed config).
int cmd_srb(const RunConfig& cfg);
/// Hyperbolicity + polygon-class certificate -> JSON report.
int cmd_certify(const RunConfig& cfg);
/// Matches a slap report against an SRB report (both computed in-process).
int cmd_compare(const RunConfig& cfg);
/// Emits a polygon description (vertices, hash, vertex classes).
int cmd_corpus(const RunConfig& cfg);
/// CSV plot data: "density", "marginal", "singular", "gamma".
int cmd_plotdata(const RunConfig& cfg, const std::string& what, double at = 0.25, int n = 1);
/// Prints a single billiard orbit as CSV.
int cmd_billiard(const RunConfig& cfg, double s0, double theta0, int steps);

}  // namespace polyerg
