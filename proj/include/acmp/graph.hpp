#ifndef ACMP_GRAPH_HPP
#define ACMP_GRAPH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acmp/matrix.hpp"

namespace acmp {

struct Edge {
    int i;
    int j;
    double weight;
};

// Immutable sparse symmetric weighted graph in compressed row layout.
// No self-loops are stored; weights are finite and >= 0; neighbor indices
// within a row are strictly increasing. Safe for concurrent reads.
class Graph {
public:
    int node_count() const { return n_; }

    std::span<const int> neighbors(int i) const {
        return {cols_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    std::span<const double> weights(int i) const {
        return {vals_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
    }
    // index into the flat edge arrays of row i's first entry
    std::size_t row_begin(int i) const { return offsets_[i]; }
    std::size_t stored_entry_count() const { return cols_.size(); }
    // number of undirected edges
    std::size_t edge_count() const { return cols_.size() / 2; }

    double degree(int i) const { return degrees_[i]; }
    const std::vector<double>& degrees() const { return degrees_; }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<int>& labels() const { return labels_; }

    friend Graph build_graph(const std::vector<Edge>& edges, int node_count,
                             std::vector<int> labels);

private:
    int n_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<int> cols_;
    std::vector<double> vals_;
    std::vector<double> degrees_;
    std::vector<int> labels_;
};

// Builds the symmetric closure of the given undirected edge list.
// Each unordered pair may appear at most once (in either orientation).
Graph build_graph(const std::vector<Edge>& edges, int node_count,
                  std::vector<int> labels = {});

Graph complete_graph(int n, double weight = 1.0);

// y_i = d_i x_i - sum_j a_ij x_j, per channel
Matrix laplacian_apply(const Graph& g, const Matrix& x);

struct GraphSpectrum {
    std::optional<double> lambda_min_positive;  // absent when D - A = 0
    double lambda_max = 0.0;
    std::vector<double> degrees;
};

// Dense symmetric eigendecomposition of D - A. Zero-eigenvalue tolerance is
// 1e-9 * lambda_max when selecting the smallest positive eigenvalue.
GraphSpectrum spectrum(const Graph& g, int dense_cap = 2048);

struct HomophilyReport {
    double level = 0.0;
    int isolated_excluded = 0;  // degree-0 nodes, left out of the average
};

HomophilyReport homophily_level(const Graph& g);

struct TwoClassGraphSpec {
    int n = 100;
    double p_in = 0.9;
    double p_out = 0.1;
    std::array<double, 2> means{-0.5, 0.5};
    double sigma = 2.0;
    int dim = 2;
    std::uint64_t seed = 0;
};

struct GraphSample {
    Graph graph;
    Matrix features;
};

// Two-class random graph: nodes 0..floor(n/2)-1 get class 0, the rest
// class 1; intra-class pairs connect with p_in, inter-class with p_out,
// unit weights; features are i.i.d. normal(mean[class], sigma^2).
GraphSample generate_two_class_graph(const TwoClassGraphSpec& spec);

}  // namespace acmp

#endif
