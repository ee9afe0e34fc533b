#ifndef ACMP_COUPLING_HPP
#define ACMP_COUPLING_HPP

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "acmp/graph.hpp"
#include "acmp/matrix.hpp"

namespace acmp {

// Topology-only coefficients a_ij / sqrt(dhat_i dhat_j), dhat_i = 1 + deg_i.
struct GcnFixed {};

struct AttentionParams {
    Matrix theta;                     // d x d' projection
    std::vector<double> attn_vector;  // length 2 d'
    double leaky_slope = 0.2;
};

// Seeded normal init, scale 1/sqrt(d'); the parameters are never trained.
AttentionParams random_attention_params(int dim, int proj_dim, std::uint64_t seed);

// Dense symmetric base-coefficient matrix, defined on every pair. Entries on
// non-edges matter only for complete-interaction constructions.
struct ExplicitMatrix {
    Matrix coefficients;
};

struct CouplingModel {
    std::variant<GcnFixed, AttentionParams, ExplicitMatrix> variant = GcnFixed{};
    double beta = 0.0;
    std::optional<Matrix> beta_matrix;  // per-edge beta, overrides the scalar

    bool is_attention() const { return std::holds_alternative<AttentionParams>(variant); }
    // feature-independent and symmetric (GcnFixed, ExplicitMatrix)
    bool is_symmetric() const { return !is_attention(); }
};

// Coefficient tables are aligned with the graph's CSR storage: entry k of
// edge_values is the coefficient for the k-th stored (directed) entry.
struct CouplingTable {
    std::vector<double> edge_values;
    std::vector<double> self_values;  // alpha_ii, attention only
};

std::vector<double> gcn_coefficients(const Graph& g);

// Row-normalized attention per Eq.-1-style softmax over N_i u {i}; the
// result is generally asymmetric.
CouplingTable attention_coefficients(const Graph& g, const Matrix& x, const AttentionParams& p);

// Effective signed coefficients a(x_i, x_j) - beta on stored edges.
std::vector<double> effective_coupling(const CouplingModel& m, const Graph& g, const Matrix& x);

// Explicit effective-coupling matrix: +s on intra-group pairs, -d on
// inter-group pairs (attraction inside, repulsion across), zero diagonal.
CouplingModel flocking_partition_coupling(int n1, int n2, double s, double d);

}  // namespace acmp

#endif
