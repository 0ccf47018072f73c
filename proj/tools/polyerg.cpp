#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "polyerg/run.hpp"

namespace {

void add_polygon_opts(CLI::App* app, polyerg::RunConfig& cfg, std::string& verts) {
    app->add_option("--polygon", cfg.corpus,
                    "corpus polygon: regular:<d> | triangle:<a>,<b> | kite:<w>,<h>,<L> | "
                    "fixture-kite | chambers:<m> | tower:<n>");
    app->add_option("--vertices", verts, "explicit vertex list: x1,y1;x2,y2;...");
    app->add_option("--out", cfg.out, "write the report to this file (default stdout)");
}

void parse_vertices(const std::string& verts, polyerg::RunConfig& cfg) {
    if (verts.empty()) return;
    std::stringstream ss(verts);
    std::string pt;
    while (std::getline(ss, pt, ';')) {
        auto comma = pt.find(',');
        if (comma == std::string::npos) throw polyerg::InputError("bad vertex: " + pt);
        cfg.vertices.push_back(
            {std::stod(pt.substr(0, comma)), std::stod(pt.substr(comma + 1))});
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"polyerg: ergodic structure of polygonal billiards with contracting "
                 "reflection laws"};
    app.require_subcommand(1);

    polyerg::RunConfig cfg;
    std::string verts;
    std::string plot_kind = "density";
    double plot_at = 0.25;
    int plot_n = 1;
    double orb_s = 0.25, orb_theta = 0.1;
    int orb_steps = 100;

    auto* slap = app.add_subcommand("slap", "slap-map ergodic decomposition");
    add_polygon_opts(slap, cfg, verts);
    slap->add_option("--bins", cfg.n_bins, "transfer-operator bins");

    auto* srb = app.add_subcommand("srb", "SRB attractor estimate");
    add_polygon_opts(srb, cfg, verts);
    srb->add_option("--sigma", cfg.sigma, "contraction strength");
    srb->add_option("--grid-nx", cfg.grid_nx);
    srb->add_option("--grid-ny", cfg.grid_ny);
    srb->add_option("--transient", cfg.n_transient);
    srb->add_option("--samples", cfg.n_sample);
    srb->add_option("--cluster-tol", cfg.cluster_tol);
    srb->add_option("--bins", cfg.n_bins);
    srb->add_option("--threads", cfg.threads, "0 = POLYERG_THREADS or 1");

    auto* certify = app.add_subcommand("certify", "hyperbolicity + polygon class certificate");
    add_polygon_opts(certify, cfg, verts);
    certify->add_option("--sigma", cfg.sigma);
    certify->add_option("--max-m", cfg.max_m);
    certify->add_option("--resolution", cfg.resolution);

    auto* compare = app.add_subcommand("compare", "match SRB clusters against slap acips");
    add_polygon_opts(compare, cfg, verts);
    compare->add_option("--sigma", cfg.sigma);
    compare->add_option("--bins", cfg.n_bins);
    compare->add_option("--grid-nx", cfg.grid_nx);
    compare->add_option("--grid-ny", cfg.grid_ny);
    compare->add_option("--transient", cfg.n_transient);
    compare->add_option("--samples", cfg.n_sample);
    compare->add_option("--match-tol", cfg.match_tol);
    compare->add_option("--strip-pad", cfg.strip_pad);
    compare->add_option("--threads", cfg.threads);

    auto* corpus = app.add_subcommand("corpus", "emit a corpus polygon description");
    add_polygon_opts(corpus, cfg, verts);

    auto* plot = app.add_subcommand("plotdata", "CSV plot data");
    add_polygon_opts(plot, cfg, verts);
    plot->add_option("--kind", plot_kind, "density | marginal | singular | gamma");
    plot->add_option("--sigma", cfg.sigma);
    plot->add_option("--bins", cfg.n_bins);
    plot->add_option("--at", plot_at, "arclength for gamma curves");
    plot->add_option("--depth", plot_n, "iterate depth for singular curves");
    plot->add_option("--resolution", cfg.resolution);

    auto* bill = app.add_subcommand("billiard", "print one orbit as CSV");
    add_polygon_opts(bill, cfg, verts);
    bill->add_option("--sigma", cfg.sigma);
    bill->add_option("--s", orb_s);
    bill->add_option("--theta", orb_theta);
    bill->add_option("--steps", orb_steps);

    CLI11_PARSE(app, argc, argv);

    try {
        parse_vertices(verts, cfg);
        if (slap->parsed()) return polyerg::cmd_slap(cfg);
        if (srb->parsed()) return polyerg::cmd_srb(cfg);
        if (certify->parsed()) return polyerg::cmd_certify(cfg);
        if (compare->parsed()) return polyerg::cmd_compare(cfg);
        if (corpus->parsed()) return polyerg::cmd_corpus(cfg);
        if (plot->parsed()) return polyerg::cmd_plotdata(cfg, plot_kind, plot_at, plot_n);
        if (bill->parsed()) return polyerg::cmd_billiard(cfg, orb_s, orb_theta, orb_steps);
    } catch (const polyerg::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return polyerg::kExitError;
    } catch (const polyerg::PolyergError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return polyerg::kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return polyerg::kExitError;
    }
    return polyerg::kExitError;
}
