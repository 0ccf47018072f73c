#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "polyerg/run.hpp"

using namespace polyerg;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_UNARY(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TmpFile {
    std::string path;
    explicit TmpFile(const std::string& name) : path("/tmp/polyerg_test_" + name) {}
    ~TmpFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("polygon resolution from corpus shorthands") {
    RunConfig cfg;
    cfg.corpus = "regular:7";
    CHECK(resolve_polygon(cfg).num_sides() == 7);
    cfg.corpus = "fixture-kite";
    CHECK(resolve_polygon(cfg).num_sides() == 4);
    cfg.corpus = "chambers:2";
    CHECK(resolve_polygon(cfg).num_sides() == 6);
    cfg.corpus = "nonsense";
    CHECK_THROWS_AS(resolve_polygon(cfg), InputError);
    cfg.corpus = "";
    CHECK_THROWS_AS(resolve_polygon(cfg), InputError);  // no vertices either
    cfg.vertices = {{0, 0}, {1, 0}, {0.5, 1}};
    CHECK(resolve_polygon(cfg).num_sides() == 3);
}

TEST_CASE("slap report for the regular pentagon") {
    RunConfig cfg;
    cfg.corpus = "regular:5";
    cfg.n_bins = 1 << 11;
    TmpFile out("slap_pentagon.json");
    cfg.out = out.path;
    CHECK(cmd_slap(cfg) == kExitOk);
    json j = json::parse(slurp(out.path));
    CHECK(j["expanding"].get<bool>());
    REQUIRE(j["acips"].size() == 1);
    CHECK(j["acips"][0]["mixing_period"].get<int>() == 2);
    CHECK(j["acips"][0]["mass"].get<double>() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(j["polygon"]["hash"].is_string());
}

TEST_CASE("non-expanding slap map exits with the diagnosis code") {
    RunConfig cfg;
    cfg.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    cfg.n_bins = 256;
    TmpFile out("slap_square.json");
    cfg.out = out.path;
    CHECK(cmd_slap(cfg) == kExitDiagnosed);
    json j = json::parse(slurp(out.path));
    CHECK_FALSE(j["expanding"].get<bool>());
}

TEST_CASE("srb reports are byte-identical across runs") {
    RunConfig cfg;
    cfg.corpus = "regular:3";
    cfg.sigma = 0.02;
    cfg.grid_nx = cfg.grid_ny = 8;
    cfg.n_transient = 1000;
    cfg.n_sample = 10000;
    cfg.n_bins = 1 << 10;
    TmpFile a("srb_a.json"), b("srb_b.json");
    cfg.out = a.path;
    CHECK(cmd_srb(cfg) == kExitOk);
    cfg.out = b.path;
    cfg.threads = 2;  // thread count must not leak into the report
    CHECK(cmd_srb(cfg) == kExitOk);
    CHECK(slurp(a.path) == slurp(b.path));

    json j = json::parse(slurp(a.path));
    CHECK(j["clusters"].size() == 1);
    CHECK(j["config_hash"].is_string());
    CHECK(j["strip_certified"].get<bool>());
}

TEST_CASE("compare command matches pentagon attractors to acips") {
    RunConfig cfg;
    cfg.corpus = "regular:5";
    cfg.sigma = 0.02;
    cfg.grid_nx = cfg.grid_ny = 8;
    cfg.n_transient = 4000;
    cfg.n_sample = 20000;
    cfg.n_bins = 1 << 11;
    TmpFile out("compare_pentagon.json");
    cfg.out = out.path;
    CHECK(cmd_compare(cfg) == kExitOk);
    json j = json::parse(slurp(out.path));
    CHECK(j["bijective"].get<bool>());
    CHECK(j["periods_match"].get<bool>());
}

TEST_CASE("plot data files carry headers and rows") {
    RunConfig cfg;
    cfg.corpus = "regular:5";
    cfg.sigma = 0.02;
    cfg.n_bins = 1 << 10;
    cfg.resolution = 128;
    for (std::string what : {"density", "marginal", "singular", "gamma"}) {
        if (what == "marginal") {
            cfg.grid_nx = cfg.grid_ny = 8;
            cfg.n_transient = 1000;
            cfg.n_sample = 3000;
        }
        TmpFile out("plot_" + what + ".csv");
        cfg.out = out.path;
        CHECK(cmd_plotdata(cfg, what) == kExitOk);
        std::string body = slurp(out.path);
        REQUIRE(!body.empty());
        CHECK(body.find('\n') != std::string::npos);
        CHECK(body.substr(0, 1) != ",");
    }
}

TEST_CASE("billiard orbit command writes one row per bounce") {
    RunConfig cfg;
    cfg.corpus = "regular:5";
    cfg.sigma = 0.1;
    TmpFile out("orbit.csv");
    cfg.out = out.path;
    CHECK(cmd_billiard(cfg, 0.13, 0.05, 50) == kExitOk);
    std::string body = slurp(out.path);
    int lines = 0;
    for (char c : body)
        if (c == '\n') ++lines;
    CHECK(lines == 52);  // header + x_0..x_50
}

TEST_CASE("config hashing is stable and input-sensitive") {
    CHECK(config_hash("abc") == config_hash("abc"));
    CHECK(config_hash("abc") != config_hash("abd"));
}
