#include "acmp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "acmp/diagnostics.hpp"
#include "acmp/errors.hpp"

namespace acmp {

std::string format_double(double v) {
    char buf[32];
    // %.17g round-trips doubles exactly; trim when fewer digits suffice
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<Edge> load_edge_list(const std::filesystem::path& path, int& node_count) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open edge list: " + path.string());
    std::vector<Edge> edges;
    node_count = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.rfind("# nodes ", 0) == 0) {
            node_count = std::max(node_count, std::atoi(line.c_str() + 8));
            continue;
        }
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        Edge e;
        if (!(ls >> e.i)) continue;  // blank or comment-only line
        if (!(ls >> e.j >> e.weight))
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 'i j weight'");
        edges.push_back(e);
        node_count = std::max({node_count, e.i + 1, e.j + 1});
    }
    return edges;
}

void save_edge_list(const std::filesystem::path& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write edge list: " + path.string());
    out << "# nodes " << g.node_count() << "\n";
    out << "# i j weight\n";
    for (int i = 0; i < g.node_count(); ++i) {
        auto nb = g.neighbors(i);
        auto w = g.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k)
            if (i < nb[k])  // each undirected edge once
                out << i << ' ' << nb[k] << ' ' << format_double(w[k]) << "\n";
    }
}

std::vector<int> load_labels(const std::filesystem::path& path, int node_count) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open labels: " + path.string());
    std::vector<int> labels(node_count, 0);
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int node, cls;
        if (!(ls >> node)) continue;
        if (!(ls >> cls)) throw IoError("labels: expected 'node_id class_id'");
        if (node < 0 || node >= node_count) throw IndexOutOfRange("label node id out of range");
        labels[node] = cls;
    }
    return labels;
}

void save_labels(const std::filesystem::path& path, const Graph& g) {
    if (!g.has_labels()) throw MissingLabels("graph has no labels to save");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write labels: " + path.string());
    out << "# node_id class_id\n";
    for (int i = 0; i < g.node_count(); ++i) out << i << ' ' << g.labels()[i] << "\n";
}

Matrix load_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open features: " + path.string());
    std::string line;
    std::getline(in, line);  // header
    int max_node = -1, max_chan = -1;
    std::vector<std::tuple<int, int, double>> cells;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        int node, chan;
        char comma;
        double value;
        if (!(ls >> node >> comma >> chan >> comma >> value))
            throw IoError("features: expected 'node,channel,value'");
        cells.emplace_back(node, chan, value);
        max_node = std::max(max_node, node);
        max_chan = std::max(max_chan, chan);
    }
    Matrix x(max_node + 1, max_chan + 1);
    for (auto [i, c, v] : cells) x(i, c) = v;
    return x;
}

void save_features_csv(const std::filesystem::path& path, const Matrix& x) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write features: " + path.string());
    out << "node,channel,value\n";
    for (int i = 0; i < x.rows(); ++i)
        for (int c = 0; c < x.cols(); ++c)
            out << i << ',' << c << ',' << format_double(x(i, c)) << "\n";
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,node,channel,value\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Matrix& x = traj.states[s];
        const std::string t = format_double(traj.times[s]);
        for (int i = 0; i < x.rows(); ++i)
            for (int c = 0; c < x.cols(); ++c)
                os << t << ',' << i << ',' << c << ',' << format_double(x(i, c)) << "\n";
    }
}

void write_clusters_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,node,corner_index\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        SignClusters sc = sign_clusters(traj.states[s]);
        const std::string t = format_double(traj.times[s]);
        for (int i = 0; i < traj.states[s].rows(); ++i)
            os << t << ',' << i << ',' << sc.corner[i] << "\n";
    }
}

}  // namespace acmp
