#include "acmp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>

#include "acmp/errors.hpp"

namespace acmp {

double dirichlet_energy(const Graph& g, const Matrix& x) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    double sum = 0.0;
    for (int i = 0; i < g.node_count(); ++i) {
        auto nb = g.neighbors(i);
        auto w = g.weights(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            double d2 = 0.0;
            for (int c = 0; c < x.cols(); ++c) {
                const double diff = x(i, c) - x(nb[k], c);
                d2 += diff * diff;
            }
            sum += w[k] * d2;
        }
    }
    return sum / g.node_count();
}

double tensor_dirichlet_energy(const Graph& g, const Matrix& x,
                               const std::function<Matrix(int, int)>& tensors) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    const int d = x.cols();
    double sum = 0.0;
    std::vector<double> diff(d);
    for (int i = 0; i < g.node_count(); ++i) {
        for (int j : g.neighbors(i)) {
            Matrix t = tensors(i, j);
            if (t.rows() != d || t.cols() != d)
                throw DimensionMismatch("edge tensor shape != d x d");
            for (int c = 0; c < d; ++c) diff[c] = x(i, c) - x(j, c);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) sum += diff[a] * t(a, b) * diff[b];
        }
    }
    return sum / g.node_count();
}

Partition Partition::split(int n1, int n2) {
    Partition p;
    p.group1.resize(n1);
    p.group2.resize(n2);
    for (int i = 0; i < n1; ++i) p.group1[i] = i;
    for (int j = 0; j < n2; ++j) p.group2[j] = n1 + j;
    return p;
}

namespace {

double second_moment(const Matrix& x, const std::vector<int>& grp) {
    double m = 0.0;
    for (int i : grp)
        for (int c = 0; c < x.cols(); ++c) m += x(i, c) * x(i, c);
    return m / static_cast<double>(grp.size());
}

std::vector<double> group_center(const Matrix& x, const std::vector<int>& grp) {
    std::vector<double> c(x.cols(), 0.0);
    for (int i : grp)
        for (int k = 0; k < x.cols(); ++k) c[k] += x(i, k);
    for (double& v : c) v /= static_cast<double>(grp.size());
    return c;
}

double centered_moment(const Matrix& x, const std::vector<int>& grp,
                       const std::vector<double>& c) {
    double m = 0.0;
    for (int i : grp)
        for (int k = 0; k < x.cols(); ++k) {
            const double d = x(i, k) - c[k];
            m += d * d;
        }
    return m / static_cast<double>(grp.size());
}

}  // namespace

MomentReport moments(const Matrix& x, const Partition& part) {
    MomentReport r;
    r.center1.assign(x.cols(), 0.0);
    r.center2.assign(x.cols(), 0.0);
    if (!part.group1.empty()) {
        r.m2_v = second_moment(x, part.group1);
        r.center1 = group_center(x, part.group1);
        r.m2_hat += centered_moment(x, part.group1, r.center1);
    }
    if (!part.group2.empty()) {
        r.m2_w = second_moment(x, part.group2);
        r.center2 = group_center(x, part.group2);
        r.m2_hat += centered_moment(x, part.group2, r.center2);
    }
    return r;
}

FlockingCondition flocking_condition(const Matrix& coupling, const Partition& part, double alpha,
                                     double delta, double eta) {
    FlockingCondition fc;
    double s = std::numeric_limits<double>::infinity();
    double d = -std::numeric_limits<double>::infinity();
    auto intra = [&](const std::vector<int>& grp) {
        for (int i : grp)
            for (int j : grp)
                if (i != j) s = std::min(s, coupling(i, j));
    };
    intra(part.group1);
    intra(part.group2);
    for (int i : part.group1)
        for (int j : part.group2) {
            d = std::max(d, -coupling(i, j));
            d = std::max(d, -coupling(j, i));
        }
    fc.s = s;
    fc.d = d;
    const double nmin =
        static_cast<double>(std::min(part.group1.size(), part.group2.size()));
    fc.margin = alpha * (s - d) * nmin - (delta + eta);
    fc.holds = fc.margin >= 0.0;
    return fc;
}

FlockingVerdict bicluster_check(const Trajectory& traj, const Partition& part, double c_prime,
                                double t_check) {
    FlockingVerdict v;
    v.c_prime = c_prime;
    v.t_check = t_check;
    v.inter_min = std::numeric_limits<double>::infinity();
    bool any_checked = false;
    bool all_above = true;

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Matrix& x = traj.states[s];
        auto spread = [&](const std::vector<int>& grp) {
            double m = 0.0;
            for (std::size_t a = 0; a < grp.size(); ++a)
                for (std::size_t b = a + 1; b < grp.size(); ++b)
                    for (int c = 0; c < x.cols(); ++c)
                        m = std::max(m, std::abs(x(grp[a], c) - x(grp[b], c)));
            return m;
        };
        v.intra_spread_1 = std::max(v.intra_spread_1, spread(part.group1));
        v.intra_spread_2 = std::max(v.intra_spread_2, spread(part.group2));

        if (traj.times[s] < t_check) continue;
        any_checked = true;
        for (int c = 0; c < x.cols(); ++c) {
            double channel_min = std::numeric_limits<double>::infinity();
            for (int i : part.group1)
                for (int j : part.group2)
                    channel_min = std::min(channel_min, std::abs(x(i, c) - x(j, c)));
            v.inter_min = std::min(v.inter_min, channel_min);
            if (channel_min < c_prime) all_above = false;
        }
    }
    if (!any_checked) {
        v.inter_min = 0.0;
        v.separated = false;
        return v;
    }
    v.separated = all_above;
    return v;
}

SignClusters sign_clusters(const Matrix& x) {
    SignClusters sc;
    sc.corner.resize(x.rows());
    std::set<int> distinct;
    for (int i = 0; i < x.rows(); ++i) {
        int corner = 0;
        for (int c = 0; c < x.cols(); ++c)
            if (x(i, c) >= 0.0) corner |= (1 << c);
        sc.corner[i] = corner;
        distinct.insert(corner);
    }
    sc.cluster_count = static_cast<int>(distinct.size());
    return sc;
}

std::vector<EnergyReport> energy_series(const Trajectory& traj, const Graph& g,
                                        const AcmpParams& params) {
    std::vector<EnergyReport> out;
    out.reserve(traj.times.size());
    const bool scalar_alpha = params.alpha_is_scalar();
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Matrix& x = traj.states[s];
        EnergyReport r;
        r.time = traj.times[s];
        r.dirichlet = dirichlet_energy(g, x);
        r.pseudo_gl = scalar_alpha ? pseudo_gl_energy(g, x, params)
                                   : std::numeric_limits<double>::quiet_NaN();
        r.norm_sq = x.frobenius_sq();
        r.mass_center.assign(x.cols(), 0.0);
        for (int i = 0; i < x.rows(); ++i)
            for (int c = 0; c < x.cols(); ++c) r.mass_center[c] += x(i, c);
        for (double& v : r.mass_center) v /= x.rows();
        out.push_back(std::move(r));
    }
    return out;
}

void write_energy_csv(std::ostream& os, const std::vector<EnergyReport>& series) {
    const int d = series.empty() ? 0 : static_cast<int>(series.front().mass_center.size());
    os << "t,dirichlet,pseudo_gl,norm_sq";
    for (int c = 0; c < d; ++c) os << ",mass_center_" << c;
    os << "\n";
    char buf[32];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        os << buf;
    };
    for (const auto& r : series) {
        put(r.time);
        os << ',';
        put(r.dirichlet);
        os << ',';
        put(r.pseudo_gl);
        os << ',';
        put(r.norm_sq);
        for (double v : r.mass_center) {
            os << ',';
            put(v);
        }
        os << "\n";
    }
}

}  // namespace acmp
