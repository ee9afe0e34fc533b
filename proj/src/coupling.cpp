#include "acmp/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "acmp/errors.hpp"
#include "acmp/rng.hpp"

namespace acmp {

AttentionParams random_attention_params(int dim, int proj_dim, std::uint64_t seed) {
    if (dim < 1 || proj_dim < 1) throw DimensionMismatch("attention dims must be >= 1");
    AttentionParams p;
    p.theta = Matrix(dim, proj_dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(proj_dim));
    Rng rng = Rng::stream(seed, 2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < proj_dim; ++j) p.theta(i, j) = rng.normal(0.0, scale);
    p.attn_vector.resize(2 * proj_dim);
    for (double& v : p.attn_vector) v = rng.normal(0.0, scale);
    return p;
}

std::vector<double> gcn_coefficients(const Graph& g) {
    const int n = g.node_count();
    std::vector<double> dhat(n);
    for (int i = 0; i < n; ++i) dhat[i] = 1.0 + g.degree(i);
    std::vector<double> coef(g.stored_entry_count());
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto w = g.weights(i);
        std::size_t base = g.row_begin(i);
        for (std::size_t k = 0; k < nb.size(); ++k)
            coef[base + k] = w[k] / std::sqrt(dhat[i] * dhat[nb[k]]);
    }
    return coef;
}

namespace {

double leaky_relu(double v, double slope) { return v >= 0.0 ? v : slope * v; }

}  // namespace

CouplingTable attention_coefficients(const Graph& g, const Matrix& x, const AttentionParams& p) {
    const int n = g.node_count();
    const int d = p.theta.rows();
    const int dp = p.theta.cols();
    if (x.rows() != n) throw DimensionMismatch("feature rows != node count");
    if (x.cols() != d) throw DimensionMismatch("feature dim != theta rows");
    if (static_cast<int>(p.attn_vector.size()) != 2 * dp)
        throw DimensionMismatch("attn_vector length != 2 * projection dim");

    // projected features and their two logit contributions
    // logit(i, j) = a1 . theta x_i + a2 . theta x_j
    std::vector<double> self_part(n, 0.0), nbr_part(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int q = 0; q < dp; ++q) {
            double proj = 0.0;
            for (int c = 0; c < d; ++c) proj += x(i, c) * p.theta(c, q);
            self_part[i] += p.attn_vector[q] * proj;
            nbr_part[i] += p.attn_vector[dp + q] * proj;
        }
    }

    CouplingTable t;
    t.edge_values.resize(g.stored_entry_count());
    t.self_values.resize(n);
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        std::size_t base = g.row_begin(i);
        double lmax = leaky_relu(self_part[i] + nbr_part[i], p.leaky_slope);
        for (int j : nb)
            lmax = std::max(lmax, leaky_relu(self_part[i] + nbr_part[j], p.leaky_slope));
        double denom = std::exp(leaky_relu(self_part[i] + nbr_part[i], p.leaky_slope) - lmax);
        for (std::size_t k = 0; k < nb.size(); ++k)
            denom += std::exp(leaky_relu(self_part[i] + nbr_part[nb[k]], p.leaky_slope) - lmax);
        t.self_values[i] =
            std::exp(leaky_relu(self_part[i] + nbr_part[i], p.leaky_slope) - lmax) / denom;
        for (std::size_t k = 0; k < nb.size(); ++k)
            t.edge_values[base + k] =
                std::exp(leaky_relu(self_part[i] + nbr_part[nb[k]], p.leaky_slope) - lmax) / denom;
    }
    return t;
}

std::vector<double> effective_coupling(const CouplingModel& m, const Graph& g, const Matrix& x) {
    const int n = g.node_count();
    std::vector<double> base;
    if (std::holds_alternative<GcnFixed>(m.variant)) {
        base = gcn_coefficients(g);
    } else if (const auto* attn = std::get_if<AttentionParams>(&m.variant)) {
        base = attention_coefficients(g, x, *attn).edge_values;
    } else {
        const auto& em = std::get<ExplicitMatrix>(m.variant);
        if (em.coefficients.rows() != n || em.coefficients.cols() != n)
            throw MissingExplicitEntry("explicit coupling matrix shape != N x N");
        base.resize(g.stored_entry_count());
        for (int i = 0; i < n; ++i) {
            auto nb = g.neighbors(i);
            std::size_t off = g.row_begin(i);
            for (std::size_t k = 0; k < nb.size(); ++k) {
                double v = em.coefficients(i, nb[k]);
                if (v != em.coefficients(nb[k], i))
                    throw MissingExplicitEntry("explicit coupling matrix not symmetric");
                base[off + k] = v;
            }
        }
    }

    if (m.beta_matrix) {
        const Matrix& bm = *m.beta_matrix;
        if (bm.rows() != n || bm.cols() != n)
            throw MissingExplicitEntry("beta matrix shape != N x N");
        for (int i = 0; i < n; ++i) {
            auto nb = g.neighbors(i);
            std::size_t off = g.row_begin(i);
            for (std::size_t k = 0; k < nb.size(); ++k) base[off + k] -= bm(i, nb[k]);
        }
    } else if (m.beta != 0.0) {
        for (double& v : base) v -= m.beta;
    }
    return base;
}

CouplingModel flocking_partition_coupling(int n1, int n2, double s, double d) {
    if (n1 < 1 || n2 < 1) throw InvalidStrength("group sizes must be >= 1");
    if (!(s > 0.0)) throw InvalidStrength("intra-group strength s must be > 0");
    if (d < 0.0) throw InvalidStrength("inter-group strength d must be >= 0");
    const int n = n1 + n2;
    ExplicitMatrix em{Matrix(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const bool same = (i < n1) == (j < n1);
            em.coefficients(i, j) = same ? s : -d;
        }
    CouplingModel m;
    m.variant = std::move(em);
    m.beta = 0.0;
    return m;
}

}  // namespace acmp
