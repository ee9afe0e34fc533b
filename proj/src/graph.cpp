#include "acmp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "acmp/errors.hpp"
#include "acmp/rng.hpp"

namespace acmp {

Graph build_graph(const std::vector<Edge>& edges, int node_count, std::vector<int> labels) {
    if (node_count < 0) throw IndexOutOfRange("negative node count");
    if (!labels.empty() && static_cast<int>(labels.size()) != node_count)
        throw DimensionMismatch("label count != node count");

    std::map<std::pair<int, int>, double> seen;  // key: (min, max)
    for (const Edge& e : edges) {
        if (e.i < 0 || e.i >= node_count || e.j < 0 || e.j >= node_count)
            throw IndexOutOfRange("edge index out of [0, node_count)");
        if (e.i == e.j) throw SelfLoop("self-loop edges are not stored");
        if (!std::isfinite(e.weight)) throw NegativeWeight("edge weight not finite");
        if (e.weight < 0.0) throw NegativeWeight("edge weight < 0");
        auto key = std::minmax(e.i, e.j);
        auto [it, inserted] = seen.emplace(key, e.weight);
        if (!inserted) {
            if (it->second != e.weight)
                throw AsymmetricConflict("same pair given two different weights");
            throw DuplicateEdge("duplicate edge");
        }
    }

    Graph g;
    g.n_ = node_count;
    g.labels_ = std::move(labels);
    std::vector<std::size_t> counts(node_count + 1, 0);
    for (const auto& [key, w] : seen) {
        ++counts[key.first + 1];
        ++counts[key.second + 1];
    }
    g.offsets_.assign(node_count + 1, 0);
    for (int i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + counts[i + 1];
    g.cols_.resize(g.offsets_[node_count]);
    g.vals_.resize(g.offsets_[node_count]);
    std::vector<std::size_t> fill(node_count, 0);
    // std::map iteration is ordered, so rows come out strictly increasing
    for (const auto& [key, w] : seen) {
        auto [a, b] = key;
        g.cols_[g.offsets_[a] + fill[a]] = b;
        g.vals_[g.offsets_[a] + fill[a]++] = w;
        g.cols_[g.offsets_[b] + fill[b]] = a;
        g.vals_[g.offsets_[b] + fill[b]++] = w;
    }
    for (int i = 0; i < node_count; ++i) {
        auto nb = g.neighbors(i);
        if (!std::is_sorted(nb.begin(), nb.end())) {
            // sort row i by neighbor index, keeping weights aligned
            std::vector<std::pair<int, double>> row(nb.size());
            for (std::size_t k = 0; k < nb.size(); ++k)
                row[k] = {g.cols_[g.offsets_[i] + k], g.vals_[g.offsets_[i] + k]};
            std::sort(row.begin(), row.end());
            for (std::size_t k = 0; k < row.size(); ++k) {
                g.cols_[g.offsets_[i] + k] = row[k].first;
                g.vals_[g.offsets_[i] + k] = row[k].second;
            }
        }
    }
    g.degrees_.assign(node_count, 0.0);
    for (int i = 0; i < node_count; ++i)
        for (double w : g.weights(i)) g.degrees_[i] += w;
    return g;
}

Graph complete_graph(int n, double weight) {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, weight});
    return build_graph(edges, n);
}

Matrix laplacian_apply(const Graph& g, const Matrix& x) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    Matrix y(x.rows(), x.cols());
    for (int i = 0; i < g.node_count(); ++i) {
        auto nb = g.neighbors(i);
        auto w = g.weights(i);
        // summed as a_ij (x_i - x_j) so constant vectors map to exact zero
        for (std::size_t k = 0; k < nb.size(); ++k)
            for (int c = 0; c < x.cols(); ++c) y(i, c) += w[k] * (x(i, c) - x(nb[k], c));
    }
    return y;
}

HomophilyReport homophily_level(const Graph& g) {
    if (!g.has_labels()) throw MissingLabels("homophily level requires node labels");
    const auto& lab = g.labels();
    double sum = 0.0;
    int counted = 0, isolated = 0;
    for (int i = 0; i < g.node_count(); ++i) {
        auto nb = g.neighbors(i);
        if (nb.empty()) {
            ++isolated;
            continue;
        }
        int same = 0;
        for (int j : nb)
            if (lab[j] == lab[i]) ++same;
        sum += static_cast<double>(same) / static_cast<double>(nb.size());
        ++counted;
    }
    HomophilyReport r;
    r.isolated_excluded = isolated;
    r.level = counted > 0 ? sum / counted : 0.0;
    return r;
}

GraphSample generate_two_class_graph(const TwoClassGraphSpec& spec) {
    if (spec.p_in < 0.0 || spec.p_in > 1.0 || spec.p_out < 0.0 || spec.p_out > 1.0)
        throw InvalidProbability("edge probabilities must be in [0, 1]");
    if (spec.sigma < 0.0) throw InvalidProbability("sigma < 0");
    if (spec.n < 0 || spec.dim < 1) throw InvalidProbability("bad n or dim");

    std::vector<int> labels(spec.n);
    for (int i = 0; i < spec.n; ++i) labels[i] = i < spec.n / 2 ? 0 : 1;

    Rng topo = Rng::stream(spec.seed, 0);
    std::vector<Edge> edges;
    for (int i = 0; i < spec.n; ++i)
        for (int j = i + 1; j < spec.n; ++j) {
            double p = labels[i] == labels[j] ? spec.p_in : spec.p_out;
            if (topo.uniform() < p) edges.push_back({i, j, 1.0});
        }

    Rng feat = Rng::stream(spec.seed, 1);
    Matrix x(spec.n, spec.dim);
    for (int i = 0; i < spec.n; ++i)
        for (int c = 0; c < spec.dim; ++c)
            x(i, c) = feat.normal(spec.means[labels[i]], spec.sigma);

    return {build_graph(edges, spec.n, std::move(labels)), std::move(x)};
}

}  // namespace acmp
