#include "polyerg/run.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace polyerg {

using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["corpus"] = cfg.corpus;
    json verts = json::array();
    for (const auto& v : cfg.vertices) verts.push_back({v.x, v.y});
    j["vertices"] = verts;
    j["sigma"] = cfg.sigma;
    j["n_bins"] = cfg.n_bins;
    j["grid_nx"] = cfg.grid_nx;
    j["grid_ny"] = cfg.grid_ny;
    j["n_transient"] = cfg.n_transient;
    j["n_sample"] = cfg.n_sample;
    j["cluster_tol"] = cfg.cluster_tol;
    j["max_period"] = cfg.max_period;
    j["max_m"] = cfg.max_m;
    j["resolution"] = cfg.resolution;
    j["match_tol"] = cfg.match_tol;
    j["strip_pad"] = cfg.strip_pad;
    return j;
}

int emit(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f) {
            std::cerr << "cannot open " << cfg.out << "\n";
            return kExitError;
        }
        f << text;
    }
    return kExitOk;
}

json polygon_json(const Polygon& p) {
    json j;
    j["hash"] = p.content_hash();
    j["sides"] = p.num_sides();
    json verts = json::array();
    for (const auto& v : p.vertices) verts.push_back({v.x, v.y});
    j["vertices"] = verts;
    json cls = json::array();
    for (auto c : p.vertex_class)
        cls.push_back(c == VertexClass::Acute ? "acute"
                                              : (c == VertexClass::Right ? "right" : "obtuse"));
    j["vertex_classes"] = cls;
    json angs = json::array();
    for (double a : p.angles) angs.push_back(a);
    j["angles"] = angs;
    return j;
}

json interval_json(const std::vector<Interval>& ivs) {
    json out = json::array();
    for (const auto& iv : ivs) out.push_back({iv.a, iv.b});
    return out;
}

json header(const RunConfig& cfg, const Polygon& p, const char* command) {
    json j;
    j["command"] = command;
    j["config"] = config_json(cfg);
    j["config_hash"] = config_hash(config_json(cfg).dump());
    j["polygon"] = polygon_json(p);
    return j;
}

json acips_json(const ErgodicDecomposition& dec) {
    json arr = json::array();
    for (size_t i = 0; i < dec.acips.size(); ++i) {
        const Acip& a = dec.acips[i];
        json ja;
        ja["index"] = i;
        ja["mixing_period"] = a.mixing_period;
        ja["mass"] = a.mass;
        ja["support"] = interval_json(a.support);
        ja["support_bins"] = a.bins.size();
        ja["components"] = a.components.size();
        arr.push_back(ja);
    }
    return arr;
}

}  // namespace

std::string config_hash(const std::string& canonical) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Polygon resolve_polygon(const RunConfig& cfg) {
    if (!cfg.vertices.empty()) return build_polygon(cfg.vertices);
    if (cfg.corpus.empty()) throw InputError("no polygon given");
    auto parts = split(cfg.corpus, ':');
    const std::string& kind = parts[0];
    std::vector<double> args;
    if (parts.size() > 1)
        for (const auto& t : split(parts[1], ',')) args.push_back(std::stod(t));
    if (kind == "regular") {
        if (args.size() != 1) throw InputError("regular:<d>");
        return regular_polygon(static_cast<int>(args[0]));
    }
    if (kind == "triangle") {
        if (args.size() != 2) throw InputError("triangle:<angle_a>,<angle_b>");
        return triangle_from_angles(args[0], args[1]);
    }
    if (kind == "kite") {
        if (args.size() != 3) throw InputError("kite:<w>,<h>,<L>");
        return kite(args[0], args[1], args[2]);
    }
    if (kind == "fixture-kite") return fixture_kite();
    if (kind == "chambers") {
        if (args.size() != 1) throw InputError("chambers:<m>");
        return separated_chambers_default(static_cast<int>(args[0])).polygon;
    }
    if (kind == "tower") {
        if (args.size() != 1) throw InputError("tower:<n>");
        return chamber_tower(static_cast<int>(args[0])).polygon;
    }
    throw InputError("unknown corpus polygon: " + kind);
}

int cmd_slap(const RunConfig& cfg) {
    Polygon p = resolve_polygon(cfg);
    json j = header(cfg, p, "slap");
    PiecewiseAffineMap psi = slap_map(p);
    j["expanding"] = !facing_parallel_sides(psi);
    j["n_bins"] = cfg.n_bins;
    j["branches"] = psi.branches.size();
    j["discontinuities"] = psi.discontinuities;
    if (!j["expanding"].get<bool>()) {
        j["acips"] = json::array();
        int rc = emit(cfg, j.dump(2) + "\n");
        return rc == kExitOk ? kExitDiagnosed : rc;
    }
    ErgodicDecomposition dec = ergodic_decomposition(psi, cfg.n_bins);
    j["acips"] = acips_json(dec);
    j["k"] = dec.acips.size();
    return emit(cfg, j.dump(2) + "\n");
}

namespace {

json srb_json(const RunConfig& cfg, const Polygon& p, const SrbReport& rep,
              const ErgodicDecomposition* dec) {
    json j = header(cfg, p, "srb");
    j["sigma"] = rep.sigma;
    j["grid"] = {rep.grid_nx, rep.grid_ny};
    j["n_transient"] = rep.n_transient;
    j["n_sample"] = rep.n_sample;
    j["theta_bound"] = rep.theta_bound;
    j["strip_certified"] = rep.strip_certified;
    j["truncated_orbits"] = rep.truncated_orbits;
    j["total_orbits"] = rep.total_orbits;
    json arr = json::array();
    for (size_t c = 0; c < rep.clusters.size(); ++c) {
        const SrbCluster& cl = rep.clusters[c];
        json jc;
        jc["index"] = c;
        jc["members"] = cl.members;
        jc["basin_fraction"] = cl.basin_fraction;
        jc["lyapunov_unstable"] = cl.lyapunov_unstable;
        jc["lyapunov_stable"] = cl.lyapunov_stable;
        jc["mixing_period"] = cl.mixing_period;
        jc["theta_max"] = cl.measure.theta_max_seen;
        jc["support"] = interval_json(cl.measure.s_support);
        jc["marginal"] = cl.measure.s_marginal;
        arr.push_back(jc);
    }
    j["clusters"] = arr;
    if (dec) j["slap_acips"] = acips_json(*dec);
    return j;
}

// annotate SRB cluster mixing periods against the slap decomposition
void annotate_periods(const Polygon& p, const ReflectionLaw& f, SrbReport& rep,
                      const ErgodicDecomposition& dec, const RunConfig& cfg) {
    for (auto& cl : rep.clusters) {
        // best acip by marginal mass in thickened support
        int best = -1;
        double best_mass = -1.0;
        const int nb = EmpiricalMeasure::kMarginalBins;
        for (size_t a = 0; a < dec.acips.size(); ++a) {
            double mass = 0.0;
            for (int b = 0; b < nb; ++b) {
                if (cl.measure.s_marginal[b] == 0.0) continue;
                double s = (b + 0.5) / nb;
                for (const auto& iv : dec.acips[a].support)
                    if (iv.contains(s, cfg.strip_pad)) {
                        mass += cl.measure.s_marginal[b];
                        break;
                    }
            }
            if (mass > best_mass) {
                best_mass = mass;
                best = static_cast<int>(a);
            }
        }
        if (best >= 0)
            cl.mixing_period = mixing_period_estimate(p, f, cl.representative, dec.acips[best],
                                                      cfg.n_transient, 20000, cfg.strip_pad);
    }
}

}  // namespace

int cmd_srb(const RunConfig& cfg) {
    Polygon p = resolve_polygon(cfg);
    ReflectionLaw f = ReflectionLaw::linear(cfg.sigma);
    SrbReport rep = find_attractors(p, f, cfg.grid_nx, cfg.grid_ny, cfg.n_transient,
                                    cfg.n_sample, cfg.cluster_tol, cfg.threads);
    PiecewiseAffineMap psi = slap_map(p);
    std::optional<ErgodicDecomposition> dec;
    if (!facing_parallel_sides(psi)) {
        dec = ergodic_decomposition(psi, cfg.n_bins);
        annotate_periods(p, f, rep, *dec, cfg);
    }
    json j = srb_json(cfg, p, rep, dec ? &*dec : nullptr);
    return emit(cfg, j.dump(2) + "\n");
}

int cmd_certify(const RunConfig& cfg) {
    Polygon p = resolve_polygon(cfg);
    json j = header(cfg, p, "certify");
    HatPdCheck hat = in_hat_Pd(p);
    j["expanding"] = hat.expanding;
    j["no_orthogonal_connection"] = hat.no_orthogonal_connection;
    j["no_preperiodic_vertex"] = hat.no_preperiodic_vertex;
    j["polygon_class_ok"] = hat.ok();
    ReflectionLaw f = ReflectionLaw::linear(cfg.sigma);
    Certificate cert = hyperbolicity_certificate(p, f, cfg.max_m, cfg.resolution);
    j["certificate"] = {{"ok", cert.ok},
                        {"m", cert.m},
                        {"branching", cert.branching},
                        {"alpha", cert.alpha},
                        {"ratio", cert.ratio},
                        {"n_required", cert.n_required},
                        {"connection_free", cert.connection_free},
                        {"max_m", cert.max_m},
                        {"resolution", cert.resolution}};
    int rc = emit(cfg, j.dump(2) + "\n");
    if (rc != kExitOk) return rc;
    return (cert.ok && hat.ok()) ? kExitOk : kExitDiagnosed;
}

int cmd_compare(const RunConfig& cfg) {
    Polygon p = resolve_polygon(cfg);
    ReflectionLaw f = ReflectionLaw::linear(cfg.sigma);
    PiecewiseAffineMap psi = slap_map(p);
    ErgodicDecomposition dec = ergodic_decomposition(psi, cfg.n_bins);
    SrbReport rep = find_attractors(p, f, cfg.grid_nx, cfg.grid_ny, cfg.n_transient,
                                    cfg.n_sample, cfg.cluster_tol, cfg.threads);
    annotate_periods(p, f, rep, dec, cfg);
    ThetaCorrespondence tc = theta_correspondence(dec, rep, cfg.match_tol, cfg.strip_pad);
    json j = header(cfg, p, "compare");
    j["sigma"] = cfg.sigma;
    j["acips"] = acips_json(dec);
    j["clusters"] = rep.clusters.size();
    j["bijective"] = tc.bijective;
    j["periods_match"] = tc.periods_match;
    json arr = json::array();
    for (const auto& m : tc.matches)
        arr.push_back({{"cluster", m.cluster},
                       {"acip", m.acip},
                       {"mass_in_support", m.mass_in_support},
                       {"period_match", m.period_match}});
    j["matches"] = arr;
    int rc = emit(cfg, j.dump(2) + "\n");
    if (rc != kExitOk) return rc;
    return (tc.bijective && tc.periods_match) ? kExitOk : kExitDiagnosed;
}

int cmd_corpus(const RunConfig& cfg) {
    Polygon p = resolve_polygon(cfg);
    json j = header(cfg, p, "corpus");
    return emit(cfg, j.dump(2) + "\n");
}

int cmd_plotdata(const RunConfig& cfg, const std::string& what, double at, int n) {
    Polygon p = resolve_polygon(cfg);
    std::ostringstream csv;
    if (what == "density") {
        PiecewiseAffineMap psi = slap_map(p);
        ErgodicDecomposition dec = ergodic_decomposition(psi, cfg.n_bins);
        csv << "acip,s,density\n";
        for (size_t a = 0; a < dec.acips.size(); ++a)
            for (int b = 0; b < dec.n_bins; ++b)
                csv << a << "," << (b + 0.5) / dec.n_bins << "," << dec.acips[a].density[b]
                    << "\n";
    } else if (what == "marginal") {
        ReflectionLaw f = ReflectionLaw::linear(cfg.sigma);
        SrbReport rep = find_attractors(p, f, cfg.grid_nx, cfg.grid_ny, cfg.n_transient,
                                        cfg.n_sample, cfg.cluster_tol, cfg.threads);
        csv << "cluster,s,mass\n";
        const int nb = EmpiricalMeasure::kMarginalBins;
        for (size_t c = 0; c < rep.clusters.size(); ++c)
            for (int b = 0; b < nb; ++b)
                csv << c << "," << (b + 0.5) / nb << ","
                    << rep.clusters[c].measure.s_marginal[b] << "\n";
    } else if (what == "singular") {
        ReflectionLaw f = ReflectionLaw::linear(cfg.sigma);
        SingularSet ss = singular_set(p, f, n, cfg.resolution);
        csv << "curve,depth,s,theta\n";
        for (size_t c = 0; c < ss.curves.size(); ++c)
            for (const auto& pt : ss.curves[c].points)
                csv << c << "," << ss.curves[c].depth << "," << pt.s << "," << pt.theta << "\n";
    } else if (what == "gamma") {
        GammaCurve g = gamma_curve(p, at);
        csv << "s,theta\n";
        for (const auto& pt : g.points) csv << pt.s << "," << pt.theta << "\n";
    } else {
        throw InputError("unknown plotdata kind: " + what);
    }
    return emit(cfg, csv.str());
}

int cmd_billiard(const RunConfig& cfg, double s0, double theta0, int steps) {
    Polygon p = resolve_polygon(cfg);
    ReflectionLaw f = ReflectionLaw::linear(cfg.sigma);
    Orbit orb = orbit(p, f, {s0, theta0}, steps);
    std::ostringstream csv;
    csv << "k,s,theta\n";
    for (size_t k = 0; k < orb.points.size(); ++k)
        csv << k << "," << orb.points[k].s << "," << orb.points[k].theta << "\n";
    int rc = emit(cfg, csv.str());
    if (rc != kExitOk) return rc;
    return orb.truncated ? kExitDiagnosed : kExitOk;
}

}  // namespace polyerg
