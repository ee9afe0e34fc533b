#include <Eigen/Dense>

#include "acmp/errors.hpp"
#include "acmp/graph.hpp"

namespace acmp {

GraphSpectrum spectrum(const Graph& g, int dense_cap) {
    const int n = g.node_count();
    if (n > dense_cap)
        throw GraphTooLargeForDenseSpectrum("node count exceeds dense spectral cap");

    GraphSpectrum s;
    s.degrees = g.degrees();
    if (n == 0) return s;

    Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        lap(i, i) = g.degree(i);
        auto nb = g.neighbors(i);
        auto w = g.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) lap(i, nb[k]) = -w[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();  // ascending
    s.lambda_max = ev(n - 1);
    const double tol = 1e-9 * std::max(s.lambda_max, 0.0);
    for (int k = 0; k < n; ++k)
        if (ev(k) > tol) {
            s.lambda_min_positive = ev(k);
            break;
        }
    return s;
}

}  // namespace acmp
