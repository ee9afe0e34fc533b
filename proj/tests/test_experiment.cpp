#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "acmp/errors.hpp"
#include "acmp/experiment.hpp"
#include "acmp/io.hpp"

using namespace acmp;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json tiny_config() {
    return json::parse(R"({
        "graph": {"two-class": {"n": 12, "seed": 5}},
        "model": "acmp-gcn",
        "params": {"alpha": 1.0, "delta": 1.0, "beta": 0.5},
        "solver": {"t-end": 1.0, "sample-every": 0.25}
    })");
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("unknown keys are rejected at every level") {
    json j = tiny_config();
    j["typo"] = 1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = tiny_config();
    j["solver"]["tend"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = tiny_config();
    j["params"]["gamma"] = 1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = tiny_config();
    j["graph"]["two-class"]["p"] = 0.9;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("config schema rules") {
    json j = tiny_config();
    j["runs"] = json::array({json{{"model", "grand"}}});
    CHECK_THROWS_AS(parse_config(j), ConfigError);  // model and runs together

    j = tiny_config();
    j.erase("model");
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = tiny_config();
    j["model"] = "mystery";
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    j = tiny_config();
    j["solver"]["t-end"] = -1.0;
    CHECK_THROWS_AS(parse_config(j), ConfigError);

    ExperimentConfig cfg = parse_config(tiny_config());
    CHECK(cfg.runs.size() == 1);
    CHECK(cfg.runs[0].model == "acmp-gcn");
    CHECK(cfg.runs[0].params.beta == 0.5);
    CHECK(cfg.solver.t_end == 1.0);
}

TEST_CASE("every preset parses") {
    for (const std::string& name : preset_names()) {
        ExperimentConfig cfg = parse_config(preset_config(name));
        CHECK_FALSE(cfg.runs.empty());
    }
    CHECK_THROWS_AS(preset_config("fig999"), ConfigError);
}

TEST_CASE("load_problem honors init types") {
    json j = tiny_config();
    ExperimentConfig cfg = parse_config(j);
    LoadedProblem features = load_problem(cfg);
    CHECK(features.x0.rows() == 12);
    CHECK(features.x0.cols() == 2);

    j["init"] = {{"type", "wells"}, {"offset", 0.05}, {"seed", 1}};
    LoadedProblem wells = load_problem(parse_config(j));
    for (int i = 0; i < 12; ++i)
        for (int c = 0; c < 2; ++c) CHECK(std::abs(std::abs(wells.x0(i, c)) - 1.0) <= 0.05);

    j["init"] = {{"type", "uniform"}, {"low", -2.0}, {"high", 3.0}, {"seed", 1}, {"dim", 4}};
    LoadedProblem uni = load_problem(parse_config(j));
    CHECK(uni.x0.cols() == 4);
    for (double v : uni.x0.data()) {
        CHECK(v >= -2.0);
        CHECK(v < 3.0);
    }
}

TEST_CASE("run_simulate writes the documented files") {
    TempDir dir("acmp_sim_out");
    ExperimentConfig cfg = parse_config(tiny_config());
    SimulateResult res = run_simulate(cfg, dir.path);
    REQUIRE(res.runs.size() == 1);
    CHECK(res.runs[0].final_time == 1.0);
    CHECK_FALSE(res.runs[0].blew_up);
    for (const char* f : {"trajectory.csv", "energy.csv", "clusters.csv", "run.json"})
        CHECK(fs::exists(dir.path / f));

    std::ifstream is(dir.path / "run.json");
    json meta;
    is >> meta;
    CHECK(meta["config"]["model"] == "acmp-gcn");
    CHECK(meta["runs"]["run"]["blew-up"] == false);
    CHECK(meta["runs"]["run"]["accepted"].get<long>() > 0);
}

TEST_CASE("multi-run configs get per-run directories") {
    TempDir dir("acmp_multi_out");
    ExperimentConfig cfg = parse_config(preset_config("fig4"));
    cfg.solver.t_end = 0.5;  // keep the unit test quick
    SimulateResult res = run_simulate(cfg, dir.path);
    REQUIRE(res.runs.size() == 2);
    CHECK(fs::exists(dir.path / "grand" / "energy.csv"));
    CHECK(fs::exists(dir.path / "acmp" / "trajectory.csv"));
}

TEST_CASE("simulate results are reproducible from the config") {
    ExperimentConfig cfg = parse_config(tiny_config());
    SimulateResult a = run_simulate(cfg, "");
    SimulateResult b = run_simulate(cfg, "");
    CHECK(a.runs[0].final_dirichlet == b.runs[0].final_dirichlet);
    CHECK(a.runs[0].trajectory.states.back() == b.runs[0].trajectory.states.back());
}

TEST_CASE("beta sweep produces one row per grid point") {
    TempDir dir("acmp_sweep_out");
    json j = tiny_config();
    j["solver"]["t-end"] = 0.5;
    ExperimentConfig cfg = parse_config(j);
    auto rows = run_sweep_beta(cfg, {0.0, 0.5, 1.0}, 2, dir.path);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].beta == 0.0);
    CHECK(rows[2].beta == 1.0);
    for (const SweepRow& r : rows) {
        CHECK(std::isfinite(r.final_dirichlet));
        CHECK(std::isfinite(r.separation));
        CHECK(r.cluster_count >= 1);
    }
    std::ifstream is(dir.path / "sweep.csv");
    std::string header;
    std::getline(is, header);
    CHECK(header == "beta,final_dirichlet,cluster_count,separation,blew_up");

    // a single-point grid is just one simulation
    auto single = run_sweep_beta(cfg, {0.0}, 1, "");
    SimulateResult direct = run_simulate([&] {
        json k = j;
        k["params"]["beta"] = 0.0;
        return parse_config(k);
    }(), "");
    CHECK(single[0].final_dirichlet == direct.runs[0].final_dirichlet);
}

TEST_CASE("flocking command pieces fit together") {
    FlockingSetup setup;
    setup.solver.t_end = 2.0;
    setup.solver.sample_every = 0.5;
    FlockingOutcome out = run_flocking(setup, "");
    CHECK(out.condition.holds);
    CHECK(out.eta2 == 50.0);

    FlockingSetup equal = setup;
    equal.d = equal.s;  // sufficient condition must fail when D >= S
    FlockingOutcome bad = run_flocking(equal, "");
    CHECK_FALSE(bad.condition.holds);
    CHECK(bad.condition.margin < 0.0);
}

TEST_CASE("gen-graph output round-trips and is deterministic") {
    TempDir a("acmp_gen_a"), b("acmp_gen_b");
    TwoClassGraphSpec spec{.n = 16, .seed = 77};
    run_gen_graph(spec, a.path);
    run_gen_graph(spec, b.path);
    for (const char* f : {"edges.txt", "labels.txt", "features.csv", "header.json"}) {
        std::ifstream fa(a.path / f), fb(b.path / f);
        std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
        std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
        CHECK(sa == sb);
        CHECK_FALSE(sa.empty());
    }

    GraphSample direct = generate_two_class_graph(spec);
    int n = 0;
    auto edges = load_edge_list(a.path / "edges.txt", n);
    Graph loaded = build_graph(edges, n, load_labels(a.path / "labels.txt", n));
    CHECK(loaded.stored_entry_count() == direct.graph.stored_entry_count());
    Matrix feats = load_features_csv(a.path / "features.csv");
    CHECK(feats == direct.features);
}
