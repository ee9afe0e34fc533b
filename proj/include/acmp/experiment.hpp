#ifndef ACMP_EXPERIMENT_HPP
#define ACMP_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acmp/diagnostics.hpp"
#include "acmp/dynamics.hpp"
#include "acmp/graph.hpp"
#include "acmp/solver.hpp"

namespace acmp {

struct GraphSource {
    std::optional<TwoClassGraphSpec> two_class;
    std::string file;           // edge list
    std::string labels_file;    // sidecar, optional
    std::string features_file;  // optional
};

struct InitSpec {
    enum class Type { Features, Wells, Uniform, Centers };
    Type type = Type::Features;
    double offset = 0.05;           // wells
    double low = -5.0, high = 5.0;  // uniform
    std::vector<double> centers{2.0, -2.0};
    double noise = 0.3;  // centers
    std::uint64_t seed = 0;
    int dim = 0;  // 0: take dimension from graph features
};

struct ParamSpec {
    std::vector<double> alpha{1.0};
    std::vector<double> delta{1.0};
    double beta = 0.0;
    PotentialVariant potential = DoubleWell{};
    std::uint64_t attention_seed = 0;
};

struct RunSpec {
    std::string name;   // empty: outputs at the output-dir root
    std::string model;  // grand | acmp-gcn | acmp-attn | acmp-trap | gradient-flow
    ParamSpec params;
};

struct ExperimentConfig {
    GraphSource graph;
    InitSpec init;
    std::vector<RunSpec> runs;
    SolverSpec solver;
    std::vector<std::string> series{"trajectory", "energy", "clusters"};
    std::vector<double> sweep_grid;
    nlohmann::json echo;  // the validated config, for run.json
};

// Strict parse: unknown keys are rejected with ConfigError.
ExperimentConfig parse_config(const nlohmann::json& j);
// Embedded presets: fig2, fig4, fig5, fig6, trapping.
nlohmann::json preset_config(const std::string& name);
std::vector<std::string> preset_names();

struct LoadedProblem {
    Graph graph;
    Matrix x0;
};
LoadedProblem load_problem(const ExperimentConfig& cfg);

Rhs build_rhs(const Graph& g, const RunSpec& run, int dim);
AcmpParams build_params(const RunSpec& run, int dim);

struct RunOutcome {
    std::string name;
    SolverStats stats;
    bool blew_up = false;
    double final_time = 0.0;
    double initial_dirichlet = 0.0;
    double final_dirichlet = 0.0;
    double final_max_abs = 0.0;
    int cluster_count = 0;
    Trajectory trajectory;
};

struct SimulateResult {
    std::vector<RunOutcome> runs;
};

// Writes trajectory.csv / energy.csv / clusters.csv / run.json under outdir
// (per-run subdirectories when the config names several runs). Empty outdir
// skips all file output.
SimulateResult run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& outdir);

struct SweepRow {
    double beta = 0.0;
    double final_dirichlet = 0.0;
    int cluster_count = 0;
    double separation = 0.0;  // min inter-class per-channel distance at t_end
    bool blew_up = false;
};

std::vector<SweepRow> run_sweep_beta(const ExperimentConfig& cfg, std::vector<double> grid,
                                     int jobs, const std::filesystem::path& outdir);

struct FlockingSetup {
    int n1 = 5, n2 = 5;
    double s = 1.0, d = 0.1;
    double eta = 0.1;
    double alpha = 1.0, delta = 0.5;
    std::vector<double> centers{2.0, -2.0};
    double noise = 0.3;
    std::uint64_t seed = 0;
    double c_prime = 0.5;
    double t_check = -1.0;  // < 0: use 0.8 * t_end
    SolverSpec solver;
};

struct FlockingOutcome {
    FlockingCondition condition;
    FlockingVerdict verdict;
    bool blew_up = false;
    double final_dirichlet = 0.0;
    double cross_energy = 0.0;  // cross-group part of the Dirichlet energy
    double eta2 = 0.0;          // directed cross-edge weight sum
    double energy_bound = 0.0;  // C^2 eta2 / N from the measured separation
    Trajectory trajectory;
    nlohmann::json to_json() const;
};

FlockingOutcome run_flocking(const FlockingSetup& setup, const std::filesystem::path& outdir);

// edges.txt + labels.txt + features.csv + header.json
void run_gen_graph(const TwoClassGraphSpec& spec, const std::filesystem::path& outdir);

}  // namespace acmp

#endif
