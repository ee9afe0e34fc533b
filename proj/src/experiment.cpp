#include "acmp/experiment.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include "acmp/errors.hpp"
#include "acmp/io.hpp"
#include "acmp/rng.hpp"

namespace acmp {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError(ctx + ": unknown key \"" + it.key() + "\"");
    }
}

double get_number(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ConfigError(ctx + ": expected a number");
    return j.get<double>();
}

int get_int(const json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
    return j.get<int>();
}

std::uint64_t get_seed(const json& j, const std::string& ctx) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw ConfigError(ctx + ": expected a nonnegative integer seed");
    return j.get<std::uint64_t>();
}

std::vector<double> get_number_or_array(const json& j, const std::string& ctx) {
    if (j.is_number()) return {j.get<double>()};
    if (j.is_array() && !j.empty()) {
        std::vector<double> out;
        for (const auto& e : j) out.push_back(get_number(e, ctx));
        return out;
    }
    throw ConfigError(ctx + ": expected a number or a non-empty array");
}

GraphSource parse_graph(const json& j) {
    check_keys(j, {"two-class", "file", "labels", "features"}, "graph");
    GraphSource src;
    if (j.contains("two-class")) {
        if (j.contains("file"))
            throw ConfigError("graph: \"two-class\" and \"file\" are mutually exclusive");
        const json& t = j.at("two-class");
        check_keys(t, {"n", "p-in", "p-out", "means", "sigma", "dim", "seed"}, "graph.two-class");
        TwoClassGraphSpec spec;
        if (t.contains("n")) spec.n = get_int(t["n"], "graph.two-class.n");
        if (t.contains("p-in")) spec.p_in = get_number(t["p-in"], "graph.two-class.p-in");
        if (t.contains("p-out")) spec.p_out = get_number(t["p-out"], "graph.two-class.p-out");
        if (t.contains("means")) {
            auto m = get_number_or_array(t["means"], "graph.two-class.means");
            if (m.size() != 2) throw ConfigError("graph.two-class.means: expected two values");
            spec.means = {m[0], m[1]};
        }
        if (t.contains("sigma")) spec.sigma = get_number(t["sigma"], "graph.two-class.sigma");
        if (t.contains("dim")) spec.dim = get_int(t["dim"], "graph.two-class.dim");
        if (t.contains("seed")) spec.seed = get_seed(t["seed"], "graph.two-class.seed");
        src.two_class = spec;
        return src;
    }
    if (!j.contains("file"))
        throw ConfigError("graph: expected \"two-class\" or \"file\"");
    src.file = j.at("file").get<std::string>();
    if (j.contains("labels")) src.labels_file = j["labels"].get<std::string>();
    if (j.contains("features")) src.features_file = j["features"].get<std::string>();
    return src;
}

InitSpec parse_init(const json& j) {
    check_keys(j, {"type", "offset", "low", "high", "centers", "noise", "seed", "dim"}, "init");
    InitSpec init;
    std::string type = j.value("type", std::string("features"));
    if (type == "features")
        init.type = InitSpec::Type::Features;
    else if (type == "wells")
        init.type = InitSpec::Type::Wells;
    else if (type == "uniform")
        init.type = InitSpec::Type::Uniform;
    else if (type == "centers")
        init.type = InitSpec::Type::Centers;
    else
        throw ConfigError("init.type: unknown value \"" + type + "\"");
    if (j.contains("offset")) init.offset = get_number(j["offset"], "init.offset");
    if (j.contains("low")) init.low = get_number(j["low"], "init.low");
    if (j.contains("high")) init.high = get_number(j["high"], "init.high");
    if (j.contains("centers")) init.centers = get_number_or_array(j["centers"], "init.centers");
    if (j.contains("noise")) init.noise = get_number(j["noise"], "init.noise");
    if (j.contains("seed")) init.seed = get_seed(j["seed"], "init.seed");
    if (j.contains("dim")) init.dim = get_int(j["dim"], "init.dim");
    return init;
}

PotentialVariant parse_potential(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "double-well") return DoubleWell{};
        throw ConfigError("params.potential: unknown name \"" + j.get<std::string>() + "\"");
    }
    check_keys(j, {"polynomial", "sine"}, "params.potential");
    if (j.contains("polynomial")) {
        PolynomialWells p;
        p.roots = get_number_or_array(j["polynomial"], "params.potential.polynomial");
        return p;
    }
    if (j.contains("sine")) {
        SineWells s;
        s.l = get_int(j["sine"], "params.potential.sine");
        return s;
    }
    throw ConfigError("params.potential: expected \"double-well\", \"polynomial\" or \"sine\"");
}

ParamSpec parse_params(const json& j, ParamSpec base) {
    check_keys(j, {"alpha", "delta", "beta", "potential", "attention-seed"}, "params");
    if (j.contains("alpha")) base.alpha = get_number_or_array(j["alpha"], "params.alpha");
    if (j.contains("delta")) base.delta = get_number_or_array(j["delta"], "params.delta");
    if (j.contains("beta")) base.beta = get_number(j["beta"], "params.beta");
    if (j.contains("potential")) base.potential = parse_potential(j["potential"]);
    if (j.contains("attention-seed"))
        base.attention_seed = get_seed(j["attention-seed"], "params.attention-seed");
    return base;
}

const std::vector<std::string> kModels = {"grand", "acmp-gcn", "acmp-attn", "acmp-trap",
                                          "gradient-flow"};

std::string parse_model(const json& j, const std::string& ctx) {
    std::string m = j.get<std::string>();
    for (const auto& known : kModels)
        if (m == known) return m;
    throw ConfigError(ctx + ": unknown model \"" + m + "\"");
}

SolverSpec parse_solver(const json& j) {
    check_keys(j,
               {"method", "step", "atol", "rtol", "t-end", "sample-every", "max-steps", "safety",
                "min-factor", "max-factor", "blowup-threshold"},
               "solver");
    SolverSpec s;
    if (j.contains("method")) {
        std::string m = j["method"].get<std::string>();
        if (m == "euler")
            s.method = Method::Euler;
        else if (m == "midpoint")
            s.method = Method::Midpoint;
        else if (m == "rk4")
            s.method = Method::Rk4;
        else if (m == "dopri5")
            s.method = Method::Dopri5;
        else
            throw ConfigError("solver.method: unknown value \"" + m + "\"");
    }
    if (j.contains("step")) s.step = get_number(j["step"], "solver.step");
    if (j.contains("atol")) s.atol = get_number(j["atol"], "solver.atol");
    if (j.contains("rtol")) s.rtol = get_number(j["rtol"], "solver.rtol");
    if (j.contains("t-end")) s.t_end = get_number(j["t-end"], "solver.t-end");
    if (j.contains("sample-every"))
        s.sample_every = get_number(j["sample-every"], "solver.sample-every");
    if (j.contains("max-steps")) s.max_steps = get_int(j["max-steps"], "solver.max-steps");
    if (j.contains("safety")) s.safety = get_number(j["safety"], "solver.safety");
    if (j.contains("min-factor")) s.min_factor = get_number(j["min-factor"], "solver.min-factor");
    if (j.contains("max-factor")) s.max_factor = get_number(j["max-factor"], "solver.max-factor");
    if (j.contains("blowup-threshold"))
        s.blowup_threshold = get_number(j["blowup-threshold"], "solver.blowup-threshold");
    if (s.t_end <= 0) throw ConfigError("solver.t-end: must be positive");
    if (s.step <= 0) throw ConfigError("solver.step: must be positive");
    return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw IoError("cannot open " + p.string() + " for writing");
    return os;
}

bool wants(const ExperimentConfig& cfg, const std::string& series) {
    for (const auto& s : cfg.series)
        if (s == series) return true;
    return false;
}

std::vector<double> broadcast(std::vector<double> v, int dim, const std::string& what) {
    if (static_cast<int>(v.size()) == dim) return v;
    if (v.size() == 1) return std::vector<double>(dim, v[0]);
    throw ConfigError(what + ": expected 1 or " + std::to_string(dim) + " values, got " +
                      std::to_string(v.size()));
}

json stats_json(const RunOutcome& out) {
    return json{{"name", out.name},
                {"accepted", out.stats.accepted},
                {"rejected", out.stats.rejected},
                {"rhs-evals", out.stats.rhs_evals},
                {"blew-up", out.blew_up},
                {"final-time", out.final_time},
                {"initial-dirichlet", out.initial_dirichlet},
                {"final-dirichlet", out.final_dirichlet},
                {"final-max-abs", out.final_max_abs},
                {"cluster-count", out.cluster_count}};
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    check_keys(j, {"graph", "init", "model", "runs", "params", "solver", "outputs", "sweep"},
               "config");
    if (!j.contains("graph")) throw ConfigError("config: missing \"graph\"");
    ExperimentConfig cfg;
    cfg.graph = parse_graph(j.at("graph"));
    if (j.contains("init")) cfg.init = parse_init(j["init"]);

    ParamSpec base;
    if (j.contains("params")) base = parse_params(j["params"], base);
    if (j.contains("model") && j.contains("runs"))
        throw ConfigError("config: \"model\" and \"runs\" are mutually exclusive");
    if (j.contains("model")) {
        cfg.runs.push_back({"", parse_model(j["model"], "model"), base});
    } else if (j.contains("runs")) {
        if (!j["runs"].is_array() || j["runs"].empty())
            throw ConfigError("runs: expected a non-empty array");
        for (std::size_t k = 0; k < j["runs"].size(); ++k) {
            const json& r = j["runs"][k];
            std::string ctx = "runs[" + std::to_string(k) + "]";
            check_keys(r, {"name", "model", "params"}, ctx);
            if (!r.contains("model")) throw ConfigError(ctx + ": missing \"model\"");
            RunSpec run;
            run.model = parse_model(r["model"], ctx + ".model");
            run.name = r.value("name", "run" + std::to_string(k));
            run.params = r.contains("params") ? parse_params(r["params"], base) : base;
            cfg.runs.push_back(std::move(run));
        }
        for (std::size_t a = 0; a < cfg.runs.size(); ++a)
            for (std::size_t b = a + 1; b < cfg.runs.size(); ++b)
                if (cfg.runs[a].name == cfg.runs[b].name)
                    throw ConfigError("runs: duplicate name \"" + cfg.runs[a].name + "\"");
    } else {
        throw ConfigError("config: expected \"model\" or \"runs\"");
    }

    if (j.contains("solver")) cfg.solver = parse_solver(j["solver"]);
    if (j.contains("outputs")) {
        check_keys(j["outputs"], {"series"}, "outputs");
        if (j["outputs"].contains("series")) {
            cfg.series.clear();
            for (const auto& s : j["outputs"]["series"]) {
                std::string name = s.get<std::string>();
                if (name != "trajectory" && name != "energy" && name != "clusters")
                    throw ConfigError("outputs.series: unknown series \"" + name + "\"");
                cfg.series.push_back(name);
            }
        }
    }
    if (j.contains("sweep")) {
        check_keys(j["sweep"], {"grid"}, "sweep");
        if (j["sweep"].contains("grid"))
            cfg.sweep_grid = get_number_or_array(j["sweep"]["grid"], "sweep.grid");
    }
    cfg.echo = j;
    return cfg;
}

std::vector<std::string> preset_names() { return {"fig2", "fig4", "fig5", "fig6", "trapping"}; }

json preset_config(const std::string& name) {
    if (name == "fig2")
        return json::parse(R"({
            "graph": {"two-class": {"seed": 7}},
            "model": "acmp-gcn",
            "params": {"alpha": 0.005, "delta": 1.0, "beta": 1.0},
            "solver": {"t-end": 30.0, "sample-every": 0.5}
        })");
    if (name == "fig4")
        return json::parse(R"({
            "graph": {"two-class": {"seed": 7}},
            "runs": [
                {"name": "grand", "model": "grand"},
                {"name": "acmp", "model": "acmp-gcn",
                 "params": {"alpha": 1.0, "delta": 1.0, "beta": 1.0}}
            ],
            "solver": {"t-end": 30.0, "sample-every": 0.5}
        })");
    if (name == "fig5")
        return json::parse(R"({
            "graph": {"two-class": {"seed": 7}},
            "model": "acmp-gcn",
            "params": {"alpha": 1.0, "delta": 1.0},
            "solver": {"t-end": 30.0, "sample-every": 0.5},
            "sweep": {"grid": [0.0, 0.25, 0.5, 0.75, 1.0]}
        })");
    if (name == "fig6")
        return json::parse(R"({
            "graph": {"two-class": {"seed": 7}},
            "runs": [
                {"name": "delta0", "model": "acmp-gcn",
                 "params": {"alpha": 0.015, "delta": 0.0, "beta": 1.0}},
                {"name": "delta1", "model": "acmp-gcn",
                 "params": {"alpha": 0.015, "delta": 1.0, "beta": 1.0}}
            ],
            "solver": {"t-end": 30.0, "sample-every": 0.5},
            "outputs": {"series": ["energy", "trajectory"]}
        })");
    if (name == "trapping")
        return json::parse(R"({
            "graph": {"two-class": {"n": 50, "seed": 11}},
            "init": {"type": "wells", "offset": 0.05, "seed": 42},
            "runs": [
                {"name": "beta0", "model": "acmp-trap",
                 "params": {"alpha": 1.0, "delta": 1.0, "beta": 0.0}},
                {"name": "beta05", "model": "acmp-trap",
                 "params": {"alpha": 1.0, "delta": 1.0, "beta": 0.5}}
            ],
            "solver": {"t-end": 50.0, "sample-every": 0.5}
        })");
    throw ConfigError("unknown preset \"" + name + "\"");
}

LoadedProblem load_problem(const ExperimentConfig& cfg) {
    Graph graph;
    Matrix features;
    if (cfg.graph.two_class) {
        GraphSample sample = generate_two_class_graph(*cfg.graph.two_class);
        graph = std::move(sample.graph);
        features = std::move(sample.features);
    } else {
        int node_count = 0;
        auto edges = load_edge_list(cfg.graph.file, node_count);
        std::vector<int> labels;
        if (!cfg.graph.labels_file.empty())
            labels = load_labels(cfg.graph.labels_file, node_count);
        graph = build_graph(edges, node_count, std::move(labels));
        if (!cfg.graph.features_file.empty()) {
            features = load_features_csv(cfg.graph.features_file);
            if (features.rows() != node_count)
                throw ConfigError("features file row count does not match the graph");
        }
    }

    const InitSpec& init = cfg.init;
    int n = graph.node_count();
    int dim = init.dim > 0 ? init.dim : features.rows() > 0 ? features.cols() : 0;
    Matrix x0;
    switch (init.type) {
        case InitSpec::Type::Features:
            if (features.rows() == 0)
                throw ConfigError("init: type \"features\" requires node features");
            x0 = std::move(features);
            break;
        case InitSpec::Type::Wells: {
            if (!graph.has_labels())
                throw ConfigError("init: type \"wells\" requires node labels");
            if (dim == 0) throw ConfigError("init: cannot determine feature dimension");
            x0 = Matrix(n, dim);
            Rng rng = Rng::stream(init.seed, 3);
            for (int i = 0; i < n; ++i) {
                double base = graph.labels()[i] == 0 ? -1.0 : 1.0;
                for (int c = 0; c < dim; ++c)
                    x0(i, c) = base + rng.uniform(-init.offset, init.offset);
            }
            break;
        }
        case InitSpec::Type::Uniform: {
            if (dim == 0) throw ConfigError("init: cannot determine feature dimension");
            x0 = Matrix(n, dim);
            Rng rng = Rng::stream(init.seed, 3);
            for (int i = 0; i < n; ++i)
                for (int c = 0; c < dim; ++c) x0(i, c) = rng.uniform(init.low, init.high);
            break;
        }
        case InitSpec::Type::Centers: {
            if (!graph.has_labels())
                throw ConfigError("init: type \"centers\" requires node labels");
            if (dim == 0) throw ConfigError("init: cannot determine feature dimension");
            x0 = Matrix(n, dim);
            Rng rng = Rng::stream(init.seed, 4);
            for (int i = 0; i < n; ++i) {
                int label = graph.labels()[i];
                if (label < 0 || label >= static_cast<int>(init.centers.size()))
                    throw ConfigError("init: label out of range of \"centers\"");
                for (int c = 0; c < dim; ++c)
                    x0(i, c) = init.centers[label] + rng.normal(0.0, init.noise);
            }
            break;
        }
    }
    return {std::move(graph), std::move(x0)};
}

AcmpParams build_params(const RunSpec& run, int dim) {
    AcmpParams p;
    p.alpha = broadcast(run.params.alpha, dim, "params.alpha");
    p.delta = broadcast(run.params.delta, dim, "params.delta");
    p.coupling = CouplingModel{GcnFixed{}, run.params.beta, std::nullopt};
    p.potential = run.params.potential;
    if (run.model == "grand") {
        p.delta.assign(dim, 0.0);
        p.coupling.beta = 0.0;
    } else if (run.model == "acmp-attn") {
        p.coupling.variant = random_attention_params(dim, dim, run.params.attention_seed);
    } else if (run.model == "acmp-trap") {
        p.trapping = true;
    }
    return p;
}

Rhs build_rhs(const Graph& g, const RunSpec& run, int dim) {
    if (run.model == "gradient-flow") return make_gradient_flow_rhs(g);
    AcmpParams p = build_params(run, dim);
    if (run.model == "grand") return make_grand_rhs(g, p.coupling);
    return make_acmp_rhs(g, std::move(p));
}

SimulateResult run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& outdir) {
    LoadedProblem problem = load_problem(cfg);
    const Graph& g = problem.graph;
    int dim = problem.x0.cols();

    bool subdirs = cfg.runs.size() > 1 || !cfg.runs.front().name.empty();
    if (!outdir.empty()) std::filesystem::create_directories(outdir);

    SimulateResult result;
    json run_summaries = json::object();
    for (const RunSpec& run : cfg.runs) {
        Rhs rhs = build_rhs(g, run, dim);
        Trajectory traj = integrate(rhs, problem.x0, cfg.solver);

        RunOutcome out;
        out.name = run.name;
        out.stats = traj.stats;
        out.blew_up = traj.blew_up;
        out.final_time = traj.final_time();
        out.initial_dirichlet = dirichlet_energy(g, traj.states.front());
        out.final_dirichlet = dirichlet_energy(g, traj.final_state());
        out.final_max_abs = traj.final_state().max_abs();
        out.cluster_count = sign_clusters(traj.final_state()).cluster_count;

        if (!outdir.empty()) {
            std::filesystem::path dir = subdirs ? outdir / run.name : outdir;
            std::filesystem::create_directories(dir);
            if (wants(cfg, "trajectory")) {
                auto os = open_out(dir / "trajectory.csv");
                write_trajectory_csv(os, traj);
            }
            if (wants(cfg, "energy")) {
                auto os = open_out(dir / "energy.csv");
                write_energy_csv(os, energy_series(traj, g, build_params(run, dim)));
            }
            if (wants(cfg, "clusters")) {
                auto os = open_out(dir / "clusters.csv");
                write_clusters_csv(os, traj);
            }
        }
        run_summaries[run.name.empty() ? "run" : run.name] = stats_json(out);
        out.trajectory = std::move(traj);
        result.runs.push_back(std::move(out));
    }

    if (!outdir.empty()) {
        json meta{{"config", cfg.echo}, {"runs", run_summaries}};
        auto os = open_out(outdir / "run.json");
        os << meta.dump(2) << "\n";
    }
    return result;
}

namespace {

double class_separation(const Graph& g, const Matrix& x) {
    if (!g.has_labels()) return std::numeric_limits<double>::quiet_NaN();
    double sep = std::numeric_limits<double>::infinity();
    for (int i = 0; i < g.node_count(); ++i)
        for (int j = 0; j < g.node_count(); ++j) {
            if (g.labels()[i] == g.labels()[j]) continue;
            for (int c = 0; c < x.cols(); ++c)
                sep = std::min(sep, std::abs(x(i, c) - x(j, c)));
        }
    return std::isfinite(sep) ? sep : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

std::vector<SweepRow> run_sweep_beta(const ExperimentConfig& cfg, std::vector<double> grid,
                                     int jobs, const std::filesystem::path& outdir) {
    if (grid.empty()) grid = cfg.sweep_grid;
    if (grid.empty()) grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    if (cfg.runs.size() != 1)
        throw ConfigError("sweep-beta: the config must define exactly one run");
    if (jobs < 1) jobs = 1;

    LoadedProblem problem = load_problem(cfg);
    const Graph& g = problem.graph;
    int dim = problem.x0.cols();

    std::vector<SweepRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next.fetch_add(1); k < grid.size(); k = next.fetch_add(1)) {
            RunSpec run = cfg.runs.front();
            run.params.beta = grid[k];
            Trajectory traj = integrate(build_rhs(g, run, dim), problem.x0, cfg.solver);
            SweepRow row;
            row.beta = grid[k];
            row.final_dirichlet = dirichlet_energy(g, traj.final_state());
            row.cluster_count = sign_clusters(traj.final_state()).cluster_count;
            row.separation = class_separation(g, traj.final_state());
            row.blew_up = traj.blew_up;
            rows[k] = row;
        }
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::future<void>> futures;
        for (int t = 0; t < jobs; ++t) futures.push_back(std::async(std::launch::async, worker));
        for (auto& f : futures) f.get();
    }

    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        auto os = open_out(outdir / "sweep.csv");
        os << "beta,final_dirichlet,cluster_count,separation,blew_up\n";
        for (const SweepRow& r : rows)
            os << format_double(r.beta) << ',' << format_double(r.final_dirichlet) << ','
               << r.cluster_count << ',' << format_double(r.separation) << ','
               << (r.blew_up ? 1 : 0) << '\n';
    }
    return rows;
}

json FlockingOutcome::to_json() const {
    return json{{"condition-holds", condition.holds},
                {"condition-margin", condition.margin},
                {"s", condition.s},
                {"d", condition.d},
                {"separated", verdict.separated},
                {"inter-min", verdict.inter_min},
                {"intra-spread-1", verdict.intra_spread_1},
                {"intra-spread-2", verdict.intra_spread_2},
                {"c-prime", verdict.c_prime},
                {"t-check", verdict.t_check},
                {"blew-up", blew_up},
                {"final-dirichlet", final_dirichlet},
                {"cross-energy", cross_energy},
                {"eta2", eta2},
                {"energy-bound", energy_bound}};
}

FlockingOutcome run_flocking(const FlockingSetup& setup, const std::filesystem::path& outdir) {
    if (setup.n1 < 1 || setup.n2 < 1) throw ConfigError("flocking: group sizes must be positive");
    int n = setup.n1 + setup.n2;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    std::vector<int> labels(n, 0);
    for (int i = setup.n1; i < n; ++i) labels[i] = 1;
    Graph g = build_graph(edges, n, labels);
    Partition part = Partition::split(setup.n1, setup.n2);

    CouplingModel coupling = flocking_partition_coupling(setup.n1, setup.n2, setup.s, setup.d);
    AcmpParams params = AcmpParams::scalar(setup.alpha, setup.delta, coupling);

    Matrix x0(n, 2);
    Rng rng = Rng::stream(setup.seed, 4);
    for (int i = 0; i < n; ++i) {
        double center = i < setup.n1 ? setup.centers[0] : setup.centers[1 % setup.centers.size()];
        for (int c = 0; c < 2; ++c) x0(i, c) = center + rng.normal(0.0, setup.noise);
    }

    SolverSpec solver = setup.solver;
    Trajectory traj = integrate(make_acmp_rhs(g, params), x0, solver);

    FlockingOutcome out;
    const Matrix& coeff = std::get<ExplicitMatrix>(coupling.variant).coefficients;
    out.condition = flocking_condition(coeff, part, setup.alpha, setup.delta, setup.eta);
    double t_check = setup.t_check >= 0 ? setup.t_check : 0.8 * solver.t_end;
    out.verdict = bicluster_check(traj, part, setup.c_prime, t_check);
    out.blew_up = traj.blew_up;
    out.final_dirichlet = dirichlet_energy(g, traj.final_state());

    const Matrix& xf = traj.final_state();
    for (int i = 0; i < n; ++i) {
        auto nbrs = g.neighbors(i);
        auto w = g.weights(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            int j = nbrs[k];
            if (labels[i] == labels[j]) continue;
            out.eta2 += w[k];
            double d2 = 0.0;
            for (int c = 0; c < xf.cols(); ++c) {
                double diff = xf(i, c) - xf(j, c);
                d2 += diff * diff;
            }
            out.cross_energy += w[k] * d2;
        }
    }
    out.cross_energy /= n;
    out.energy_bound = out.verdict.inter_min * out.verdict.inter_min * out.eta2 / n;

    if (!outdir.empty()) {
        std::filesystem::create_directories(outdir);
        {
            auto os = open_out(outdir / "trajectory.csv");
            write_trajectory_csv(os, traj);
        }
        {
            auto os = open_out(outdir / "energy.csv");
            write_energy_csv(os, energy_series(traj, g, params));
        }
        auto os = open_out(outdir / "flocking.json");
        os << out.to_json().dump(2) << "\n";
    }
    out.trajectory = std::move(traj);
    return out;
}

void run_gen_graph(const TwoClassGraphSpec& spec, const std::filesystem::path& outdir) {
    GraphSample sample = generate_two_class_graph(spec);
    std::filesystem::create_directories(outdir);
    save_edge_list(outdir / "edges.txt", sample.graph);
    save_labels(outdir / "labels.txt", sample.graph);
    save_features_csv(outdir / "features.csv", sample.features);
    HomophilyReport hom = homophily_level(sample.graph);
    json header{{"n", spec.n},
                {"p-in", spec.p_in},
                {"p-out", spec.p_out},
                {"means", {spec.means[0], spec.means[1]}},
                {"sigma", spec.sigma},
                {"dim", spec.dim},
                {"seed", spec.seed},
                {"edges", sample.graph.edge_count()},
                {"homophily", hom.level},
                {"isolated-excluded", hom.isolated_excluded}};
    auto os = open_out(outdir / "header.json");
    os << header.dump(2) << "\n";
}

}  // namespace acmp
