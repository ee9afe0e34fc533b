#ifndef ACMP_IO_HPP
#define ACMP_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "acmp/graph.hpp"
#include "acmp/matrix.hpp"
#include "acmp/solver.hpp"

namespace acmp {

// Edge-list text format: one "i j weight" triple per line, '#' comments.
std::vector<Edge> load_edge_list(const std::filesystem::path& path, int& node_count);
void save_edge_list(const std::filesystem::path& path, const Graph& g);

// Label sidecar: one "node_id class_id" per line.
std::vector<int> load_labels(const std::filesystem::path& path, int node_count);
void save_labels(const std::filesystem::path& path, const Graph& g);

// Features: "node,channel,value" CSV with header.
Matrix load_features_csv(const std::filesystem::path& path);
void save_features_csv(const std::filesystem::path& path, const Matrix& x);

// trajectory.csv: t,node,channel,value
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
// clusters.csv: t,node,corner_index
void write_clusters_csv(std::ostream& os, const Trajectory& traj);

std::string format_double(double v);  // shortest round-trip-exact decimal

}  // namespace acmp

#endif
