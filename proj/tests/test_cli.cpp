#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string binary() {
    const char* bin = std::getenv("ACMP_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "ACMP_BIN must point at the CLI binary");
    return bin;
}

struct RunResult {
    int exit_code;
    std::string output;  // stdout and stderr combined
};

RunResult run(const std::string& args) {
    fs::path log = fs::temp_directory_path() / "acmp_cli_log.txt";
    std::string cmd = binary() + " " + args + " > " + log.string() + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream is(log);
    std::string out((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    int code = -1;
#ifdef WEXITSTATUS
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
#else
    code = status;
#endif
    return {code, out};
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_tiny_config(const fs::path& dir) {
    json cfg = {
        {"graph", {{"two-class", {{"n", 10}, {"seed", 4}}}}},
        {"model", "acmp-gcn"},
        {"params", {{"alpha", 1.0}, {"delta", 1.0}, {"beta", 0.5}}},
        {"solver", {{"t-end", 1.0}, {"sample-every", 0.5}}},
    };
    fs::path p = dir / "config.json";
    std::ofstream os(p);
    os << cfg.dump(2);
    return p;
}

}  // namespace

TEST_CASE("help exits zero, missing input exits two") {
    CHECK(run("--help").exit_code == 0);
    CHECK(run("simulate --help").exit_code == 0);

    RunResult r = run("simulate");
    CHECK(r.exit_code == 2);
    json err = json::parse(r.output);
    CHECK(err.contains("error"));
    CHECK(err.contains("message"));

    CHECK(run("simulate --config /nonexistent.json").exit_code == 2);
    CHECK(run("simulate --preset not-a-preset").exit_code == 2);
    CHECK(run("frobnicate").exit_code == 2);
}

TEST_CASE("simulate runs a config file and writes outputs") {
    TempDir dir("acmp_cli_sim");
    fs::path cfg = write_tiny_config(dir.path);
    RunResult r = run("simulate --config " + cfg.string() + " --out " + (dir.path / "o").string());
    CHECK(r.exit_code == 0);
    for (const char* f : {"trajectory.csv", "energy.csv", "clusters.csv", "run.json"})
        CHECK(fs::exists(dir.path / "o" / f));

    // flag overrides win over config values
    RunResult r2 = run("simulate --config " + cfg.string() + " --t-end 2.0 --beta 0 --out " +
                       (dir.path / "o2").string());
    CHECK(r2.exit_code == 0);
    json meta = json::parse(slurp(dir.path / "o2" / "run.json"));
    CHECK(meta["config"]["solver"]["t-end"] == 2.0);
    CHECK(meta["config"]["params"]["beta"] == 0.0);

    // bad config key is a config error
    json broken = json::parse(slurp(cfg));
    broken["nonsense"] = true;
    std::ofstream(dir.path / "broken.json") << broken.dump();
    CHECK(run("simulate --config " + (dir.path / "broken.json").string()).exit_code == 2);
}

TEST_CASE("identical invocations produce identical files") {
    TempDir dir("acmp_cli_repro");
    fs::path cfg = write_tiny_config(dir.path);
    std::string base = "simulate --config " + cfg.string() + " --out ";
    CHECK(run(base + (dir.path / "a").string()).exit_code == 0);
    CHECK(run(base + (dir.path / "b").string()).exit_code == 0);
    for (const char* f : {"trajectory.csv", "energy.csv", "clusters.csv"})
        CHECK(slurp(dir.path / "a" / f) == slurp(dir.path / "b" / f));
}

TEST_CASE("gen-graph respects --seed and ACMP_SEED") {
    TempDir dir("acmp_cli_gen");
    std::string out1 = (dir.path / "g1").string();
    std::string out2 = (dir.path / "g2").string();
    std::string out3 = (dir.path / "g3").string();
    CHECK(run("gen-graph --n 14 --seed 9 --out " + out1).exit_code == 0);
    CHECK(run("gen-graph --n 14 --seed 9 --out " + out2).exit_code == 0);
    CHECK(slurp(dir.path / "g1" / "edges.txt") == slurp(dir.path / "g2" / "edges.txt"));

    RunResult env = run("gen-graph --n 14 --out " + out3);
    CHECK(env.exit_code == 0);  // without ACMP_SEED the default seed 0 applies
    json header = json::parse(slurp(dir.path / "g3" / "header.json"));
    CHECK(header["seed"] == 0);

    fs::path log = fs::temp_directory_path() / "acmp_cli_log.txt";
    std::string cmd = "ACMP_SEED=9 " + binary() + " gen-graph --n 14 --out " +
                      (dir.path / "g4").string() + " > " + log.string() + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    CHECK(slurp(dir.path / "g4" / "edges.txt") == slurp(dir.path / "g1" / "edges.txt"));
}

TEST_CASE("sweep-beta and flocking subcommands run end to end") {
    TempDir dir("acmp_cli_misc");
    fs::path cfg = write_tiny_config(dir.path);
    RunResult sw = run("sweep-beta --config " + cfg.string() + " --grid 0 0.5 --jobs 2 --out " +
                       (dir.path / "sw").string());
    CHECK(sw.exit_code == 0);
    std::string csv = slurp(dir.path / "sw" / "sweep.csv");
    CHECK(csv.rfind("beta,final_dirichlet,cluster_count,separation,blew_up", 0) == 0);

    RunResult fl = run("flocking --t-end 2 --out " + (dir.path / "fl").string());
    CHECK(fl.exit_code == 0);
    json verdict = json::parse(slurp(dir.path / "fl" / "flocking.json"));
    CHECK(verdict["condition-holds"] == true);
}
