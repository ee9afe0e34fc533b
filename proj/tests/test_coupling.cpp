#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acmp/coupling.hpp"
#include "acmp/errors.hpp"
#include "acmp/graph.hpp"
#include "acmp/rng.hpp"

using namespace acmp;

namespace {
Graph k2() { return build_graph({{0, 1, 1.0}}, 2); }
}  // namespace

TEST_CASE("gcn coefficients on tiny graphs") {
    Graph g = k2();
    auto coef = gcn_coefficients(g);
    REQUIRE(coef.size() == 2);
    CHECK(coef[0] == 0.5);
    CHECK(coef[1] == 0.5);

    Graph star = build_graph({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, 4);
    auto sc = gcn_coefficients(star);
    for (double v : sc) CHECK(v == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));

    CHECK(gcn_coefficients(build_graph({}, 2)).empty());
}

TEST_CASE("gcn table is symmetric with values in (0, 1]") {
    GraphSample s = generate_two_class_graph({.n = 40, .seed = 3});
    const Graph& g = s.graph;
    auto coef = gcn_coefficients(g);
    for (int i = 0; i < g.node_count(); ++i) {
        auto nbrs = g.neighbors(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            double v = coef[g.row_begin(i) + k];
            CHECK(v > 0.0);
            CHECK(v <= 1.0);
            int j = nbrs[k];
            auto back = g.neighbors(j);
            for (std::size_t m = 0; m < back.size(); ++m)
                if (back[m] == i) CHECK(coef[g.row_begin(j) + m] == v);
        }
    }
}

TEST_CASE("effective coupling applies beta on K2") {
    Graph g = k2();
    Matrix x(2, 1);
    CHECK(effective_coupling({GcnFixed{}, 0.0, std::nullopt}, g, x)[0] == 0.5);
    CHECK(effective_coupling({GcnFixed{}, 0.5, std::nullopt}, g, x)[0] == 0.0);
    CHECK(effective_coupling({GcnFixed{}, 1.0, std::nullopt}, g, x)[0] == -0.5);
}

TEST_CASE("effective coupling with beta = 0 equals the base table") {
    GraphSample s = generate_two_class_graph({.n = 30, .seed = 8});
    Matrix x(30, 1);
    CHECK(effective_coupling({GcnFixed{}, 0.0, std::nullopt}, s.graph, x) ==
          gcn_coefficients(s.graph));
}

TEST_CASE("attention is uniform for identical features or zero logits") {
    Graph star = build_graph({{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, 4);
    AttentionParams p = random_attention_params(2, 2, 99);
    Matrix same(4, 2, 0.7);
    CouplingTable t = attention_coefficients(star, same, p);
    CHECK(t.self_values[0] == doctest::Approx(0.25).epsilon(1e-14));
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(t.edge_values[star.row_begin(0) + k] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(t.self_values[1] == doctest::Approx(0.5).epsilon(1e-14));

    AttentionParams zero = p;
    for (double& v : zero.attn_vector) v = 0.0;
    Rng rng(5);
    Matrix x(4, 2);
    for (double& v : x.data()) v = rng.normal(0.0, 1.0);
    CouplingTable u = attention_coefficients(star, x, zero);
    CHECK(u.self_values[0] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("attention reproduces softmax(0, ln 2) = (1/3, 2/3)") {
    Graph g = k2();
    AttentionParams p;
    p.theta = Matrix::from_rows({{1.0}});
    p.attn_vector = {0.0, 1.0};
    p.leaky_slope = 0.2;
    Matrix x = Matrix::column({0.0, std::log(2.0)});
    CouplingTable t = attention_coefficients(g, x, p);
    CHECK(std::abs(t.self_values[0] - 1.0 / 3.0) <= 1e-12);
    CHECK(std::abs(t.edge_values[g.row_begin(0)] - 2.0 / 3.0) <= 1e-12);
}

TEST_CASE("attention rows sum to one with entries in (0, 1)") {
    GraphSample s = generate_two_class_graph({.n = 25, .dim = 3, .seed = 31});
    AttentionParams p = random_attention_params(3, 4, 7);
    CouplingTable t = attention_coefficients(s.graph, s.features, p);
    for (int i = 0; i < 25; ++i) {
        double sum = t.self_values[i];
        CHECK(t.self_values[i] > 0.0);
        CHECK(t.self_values[i] < 1.0);
        auto nbrs = s.graph.neighbors(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) {
            double v = t.edge_values[s.graph.row_begin(i) + k];
            CHECK(v > 0.0);
            CHECK(v < 1.0);
            sum += v;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("attention is invariant under a per-row logit shift") {
    // With d' = 1 the self half of the attention vector contributes a
    // constant per row. The rectifier before the softmax is only linear on
    // the positive branch, so keep every logit strictly positive (positive
    // features, weights, and shift); there the constant is a pure softmax
    // shift and the coefficients must not change.
    GraphSample s = generate_two_class_graph({.n = 20, .dim = 2, .seed = 12});
    Matrix x(20, 2);
    Rng rng(6);
    for (double& v : x.data()) v = rng.uniform(0.5, 2.0);
    AttentionParams p;
    p.theta = Matrix::from_rows({{0.4}, {1.1}});
    p.attn_vector = {0.8, 1.3};
    AttentionParams shifted = p;
    shifted.attn_vector[0] += 2.5;
    CouplingTable a = attention_coefficients(s.graph, x, p);
    CouplingTable b = attention_coefficients(s.graph, x, shifted);
    for (std::size_t k = 0; k < a.edge_values.size(); ++k)
        CHECK(a.edge_values[k] == doctest::Approx(b.edge_values[k]).epsilon(1e-12));
    for (std::size_t i = 0; i < a.self_values.size(); ++i)
        CHECK(a.self_values[i] == doctest::Approx(b.self_values[i]).epsilon(1e-12));
}

TEST_CASE("random attention parameters are seeded deterministically") {
    AttentionParams a = random_attention_params(3, 5, 42);
    AttentionParams b = random_attention_params(3, 5, 42);
    AttentionParams c = random_attention_params(3, 5, 43);
    CHECK(a.theta == b.theta);
    CHECK(a.attn_vector == b.attn_vector);
    CHECK(a.theta != c.theta);
}

TEST_CASE("attention dimension validation") {
    Graph g = k2();
    AttentionParams p = random_attention_params(2, 2, 1);
    Matrix wrong(2, 3);
    CHECK_THROWS_AS(attention_coefficients(g, wrong, p), DimensionMismatch);
}

TEST_CASE("flocking partition coupling construction") {
    CouplingModel tiny = flocking_partition_coupling(1, 1, 1.0, 0.1);
    const Matrix& m = std::get<ExplicitMatrix>(tiny.variant).coefficients;
    CHECK(m.rows() == 2);
    CHECK(m(0, 1) == -0.1);
    CHECK(m(1, 0) == -0.1);
    CHECK(m(0, 0) == 0.0);

    CouplingModel decoupled = flocking_partition_coupling(2, 3, 2.0, 0.0);
    const Matrix& dm = std::get<ExplicitMatrix>(decoupled.variant).coefficients;
    for (int i = 0; i < 2; ++i)
        for (int j = 2; j < 5; ++j) CHECK(dm(i, j) == 0.0);

    CouplingModel big = flocking_partition_coupling(5, 5, 1.0, 0.2);
    const Matrix& bm = std::get<ExplicitMatrix>(big.variant).coefficients;
    REQUIRE(bm.rows() == 10);
    double min_intra = 1e300, max_inter = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            if (i == j) continue;
            bool same = (i < 5) == (j < 5);
            if (same)
                min_intra = std::min(min_intra, bm(i, j));
            else
                max_inter = std::max(max_inter, std::abs(bm(i, j)));
        }
    CHECK(min_intra == 1.0);
    CHECK(max_inter == 0.2);
    CHECK(big.beta == 0.0);

    CHECK_THROWS_AS(flocking_partition_coupling(0, 1, 1.0, 0.1), InvalidStrength);
    CHECK_THROWS_AS(flocking_partition_coupling(1, 1, 0.0, 0.1), InvalidStrength);
    CHECK_THROWS_AS(flocking_partition_coupling(1, 1, 1.0, -0.1), InvalidStrength);
}

TEST_CASE("explicit matrices are validated") {
    Graph g = k2();
    Matrix bad = Matrix::from_rows({{0.0, 1.0}, {2.0, 0.0}});
    CouplingModel m{ExplicitMatrix{bad}, 0.0, std::nullopt};
    Matrix x(2, 1);
    CHECK_THROWS_AS(effective_coupling(m, g, x), MissingExplicitEntry);

    Matrix small = Matrix::from_rows({{0.0}});
    CouplingModel m2{ExplicitMatrix{small}, 0.0, std::nullopt};
    CHECK_THROWS_AS(effective_coupling(m2, g, x), MissingExplicitEntry);
}
