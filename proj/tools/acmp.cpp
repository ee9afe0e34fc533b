#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acmp/errors.hpp"
#include "acmp/experiment.hpp"
#include "acmp/io.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct CommonOpts {
    std::string config_path;
    std::string preset;
    std::string out = "out";
    std::optional<double> t_end;
    std::optional<double> beta;
    std::optional<double> alpha;
    std::optional<double> delta;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_params = true) {
    cmd->add_option("--config", o.config_path, "JSON config file");
    cmd->add_option("--preset", o.preset, "built-in configuration name");
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
    cmd->add_option("--t-end", o.t_end, "override solver t-end");
    cmd->add_option("--seed", o.seed, "override the graph seed");
    if (with_params) {
        cmd->add_option("--beta", o.beta, "override params.beta");
        cmd->add_option("--alpha", o.alpha, "override params.alpha");
        cmd->add_option("--delta", o.delta, "override params.delta");
    }
}

json load_config_json(const CommonOpts& o) {
    if (!o.config_path.empty() && !o.preset.empty())
        throw acmp::ConfigError("--config and --preset are mutually exclusive");
    if (!o.preset.empty()) return acmp::preset_config(o.preset);
    if (o.config_path.empty())
        throw acmp::ConfigError("either --config or --preset is required");
    std::ifstream is(o.config_path);
    if (!is) throw acmp::IoError("cannot open config file " + o.config_path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw acmp::ConfigError(std::string("invalid JSON in config file: ") + e.what());
    }
    return j;
}

// CLI overrides patch the config before validation, so they obey the same
// rules as file values. The seed falls back to the ACMP_SEED env variable.
void apply_overrides(json& j, const CommonOpts& o) {
    if (o.t_end) j["solver"]["t-end"] = *o.t_end;
    auto patch_param = [&](const char* key, std::optional<double> v) {
        if (!v) return;
        if (j.contains("runs"))
            for (auto& r : j["runs"]) r["params"][key] = *v;
        else
            j["params"][key] = *v;
    };
    patch_param("beta", o.beta);
    patch_param("alpha", o.alpha);
    patch_param("delta", o.delta);

    std::optional<std::uint64_t> seed = o.seed;
    if (!seed) {
        if (const char* env = std::getenv("ACMP_SEED")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0')
                throw acmp::ConfigError("ACMP_SEED must be a nonnegative integer");
            bool already_set = j.contains("graph") && j["graph"].contains("two-class") &&
                               j["graph"]["two-class"].contains("seed");
            if (!already_set) seed = v;
        }
    }
    if (seed && j.contains("graph") && j["graph"].contains("two-class"))
        j["graph"]["two-class"]["seed"] = *seed;
}

void report_error(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

int run_simulate_cmd(const CommonOpts& o) {
    json j = load_config_json(o);
    apply_overrides(j, o);
    acmp::ExperimentConfig cfg = acmp::parse_config(j);
    acmp::SimulateResult res = acmp::run_simulate(cfg, o.out);
    for (const auto& run : res.runs) {
        std::cout << (run.name.empty() ? "run" : run.name) << ": t=" << run.final_time
                  << " dirichlet=" << acmp::format_double(run.final_dirichlet)
                  << " clusters=" << run.cluster_count << " max|x|="
                  << acmp::format_double(run.final_max_abs)
                  << (run.blew_up ? " [blow-up]" : "") << "\n";
    }
    return kExitOk;
}

int run_sweep_cmd(const CommonOpts& o, const std::vector<double>& grid, int jobs) {
    json j = load_config_json(o);
    apply_overrides(j, o);
    acmp::ExperimentConfig cfg = acmp::parse_config(j);
    auto rows = acmp::run_sweep_beta(cfg, grid, jobs, o.out);
    for (const auto& r : rows)
        std::cout << "beta=" << acmp::format_double(r.beta)
                  << " dirichlet=" << acmp::format_double(r.final_dirichlet)
                  << " clusters=" << r.cluster_count << (r.blew_up ? " [blow-up]" : "") << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Allen-Cahn message-passing dynamics on graphs"};
    app.require_subcommand(1);

    CommonOpts sim_opts;
    CLI::App* sim = app.add_subcommand("simulate", "integrate one configuration");
    add_common(sim, sim_opts);

    CommonOpts sweep_opts;
    std::vector<double> grid;
    int jobs = 1;
    CLI::App* sweep = app.add_subcommand("sweep-beta", "run a beta grid");
    add_common(sweep, sweep_opts);
    sweep->add_option("--grid", grid, "beta values (default: config grid)");
    sweep->add_option("--jobs", jobs, "parallel simulations")->capture_default_str();

    acmp::TwoClassGraphSpec gspec;
    std::string gen_out = "out";
    CLI::App* gen = app.add_subcommand("gen-graph", "sample a two-class graph");
    gen->add_option("--n", gspec.n, "node count")->capture_default_str();
    gen->add_option("--p-in", gspec.p_in, "intra-class edge probability")->capture_default_str();
    gen->add_option("--p-out", gspec.p_out, "inter-class edge probability")->capture_default_str();
    gen->add_option("--means", gspec.means, "class feature means");
    gen->add_option("--sigma", gspec.sigma, "feature standard deviation")->capture_default_str();
    gen->add_option("--dim", gspec.dim, "feature dimension")->capture_default_str();
    std::optional<std::uint64_t> gen_seed;
    gen->add_option("--seed", gen_seed, "graph seed (default: ACMP_SEED or 0)");
    gen->add_option("--out", gen_out, "output directory")->capture_default_str();

    acmp::FlockingSetup fsetup;
    fsetup.solver.t_end = 30.0;
    fsetup.solver.sample_every = 0.5;
    std::string flock_out = "out";
    double flock_t_end = fsetup.solver.t_end;
    CLI::App* flock = app.add_subcommand("flocking", "two-group attract/repel run");
    flock->add_option("--n1", fsetup.n1, "first group size")->capture_default_str();
    flock->add_option("--n2", fsetup.n2, "second group size")->capture_default_str();
    flock->add_option("--s", fsetup.s, "intra-group attraction")->capture_default_str();
    flock->add_option("--d", fsetup.d, "inter-group repulsion")->capture_default_str();
    flock->add_option("--eta", fsetup.eta, "condition slack term")->capture_default_str();
    flock->add_option("--alpha", fsetup.alpha, "diffusion strength")->capture_default_str();
    flock->add_option("--delta", fsetup.delta, "well strength")->capture_default_str();
    flock->add_option("--c-prime", fsetup.c_prime, "separation threshold")->capture_default_str();
    flock->add_option("--t-check", fsetup.t_check, "separation check start (default 0.8 t-end)");
    flock->add_option("--noise", fsetup.noise, "initial spread")->capture_default_str();
    flock->add_option("--t-end", flock_t_end, "integration time")->capture_default_str();
    std::optional<std::uint64_t> flock_seed;
    flock->add_option("--seed", flock_seed, "initial-condition seed (default: ACMP_SEED or 0)");
    flock->add_option("--out", flock_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        report_error("cli", e.what());
        return kExitConfig;
    }

    auto env_seed = []() -> std::optional<std::uint64_t> {
        if (const char* env = std::getenv("ACMP_SEED")) {
            char* end = nullptr;
            unsigned long long v = std::strtoull(env, &end, 10);
            if (end != env && *end == '\0') return v;
        }
        return std::nullopt;
    };

    try {
        if (sim->parsed()) return run_simulate_cmd(sim_opts);
        if (sweep->parsed()) return run_sweep_cmd(sweep_opts, grid, jobs);
        if (gen->parsed()) {
            gspec.seed = gen_seed ? *gen_seed : env_seed().value_or(0);
            acmp::run_gen_graph(gspec, gen_out);
            std::cout << "wrote " << gen_out << "\n";
            return kExitOk;
        }
        if (flock->parsed()) {
            fsetup.solver.t_end = flock_t_end;
            fsetup.seed = flock_seed ? *flock_seed : env_seed().value_or(0);
            acmp::FlockingOutcome out = acmp::run_flocking(fsetup, flock_out);
            std::cout << out.to_json().dump(2) << "\n";
            return kExitOk;
        }
    } catch (const acmp::ConfigError& e) {
        report_error("config", e.what());
        return kExitConfig;
    } catch (const acmp::IoError& e) {
        report_error("io", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        report_error("runtime", e.what());
        return kExitRuntime;
    }
    return kExitOk;
}
