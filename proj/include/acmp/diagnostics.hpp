#ifndef ACMP_DIAGNOSTICS_HPP
#define ACMP_DIAGNOSTICS_HPP

#include <functional>
#include <iosfwd>
#include <vector>

#include "acmp/dynamics.hpp"
#include "acmp/graph.hpp"
#include "acmp/matrix.hpp"
#include "acmp/solver.hpp"

namespace acmp {

// E(x) = (1/N) sum_i sum_{j in N_i} a_ij |x_i - x_j|^2, raw adjacency,
// every edge counted in both directions.
double dirichlet_energy(const Graph& g, const Matrix& x);

// E = (1/N) sum_i sum_{j in N_i} (x_i - x_j)^T T(i,j) (x_i - x_j).
// Nonnegative when every per-edge tensor is symmetric PSD; otherwise the
// signed value is reported as-is.
double tensor_dirichlet_energy(const Graph& g, const Matrix& x,
                               const std::function<Matrix(int, int)>& tensors);

struct Partition {
    std::vector<int> group1;
    std::vector<int> group2;

    static Partition split(int n1, int n2);  // [0, n1) vs [n1, n1 + n2)
};

struct MomentReport {
    double m2_v = 0.0;    // (1/N1) sum |x_i|^2 over group 1
    double m2_w = 0.0;    // same over group 2
    double m2_hat = 0.0;  // second moments about the group centers, summed
    std::vector<double> center1;
    std::vector<double> center2;
};

MomentReport moments(const Matrix& x, const Partition& part);

struct FlockingCondition {
    bool holds = false;
    double margin = 0.0;  // alpha (S - D) min{N1, N2} - (delta + eta)
    double s = 0.0;       // min intra effective coupling
    double d = 0.0;       // max inter repulsion magnitude
};

// Sufficient bi-cluster flocking condition evaluated on an explicit
// effective-coupling matrix (intra entries attract, inter entries repel).
FlockingCondition flocking_condition(const Matrix& coupling, const Partition& part, double alpha,
                                     double delta, double eta);

struct FlockingVerdict {
    double intra_spread_1 = 0.0;  // sup over samples of max intra distance, per channel
    double intra_spread_2 = 0.0;
    double inter_min = 0.0;  // min cross-group per-channel distance for t >= t_check
    bool separated = false;  // every channel stays >= c_prime for all t >= t_check
    double c_prime = 0.0;
    double t_check = 0.0;
};

FlockingVerdict bicluster_check(const Trajectory& traj, const Partition& part, double c_prime,
                                double t_check);

struct SignClusters {
    std::vector<int> corner;  // bit k set when channel k >= 0 (tie -> +1)
    int cluster_count = 0;
};

SignClusters sign_clusters(const Matrix& x);

struct EnergyReport {
    double time = 0.0;
    double dirichlet = 0.0;
    double pseudo_gl = 0.0;  // NaN when alpha is not scalar
    double norm_sq = 0.0;
    std::vector<double> mass_center;
};

std::vector<EnergyReport> energy_series(const Trajectory& traj, const Graph& g,
                                        const AcmpParams& params);

// header: t,dirichlet,pseudo_gl,norm_sq,mass_center_0..d-1
void write_energy_csv(std::ostream& os, const std::vector<EnergyReport>& series);

}  // namespace acmp

#endif
