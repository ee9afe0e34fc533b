#include "acmp/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "acmp/errors.hpp"

namespace acmp {

namespace {

constexpr double kPi = 3.14159265358979323846;

double polynomial_force_unit(const PolynomialWells& w, double x) {
    double prod = 1.0;
    for (double r : w.roots) prod *= (x - r);
    return -prod;
}

void check_roots(const PolynomialWells& w) {
    if (w.roots.empty() || w.roots.size() % 2 == 0)
        throw DimensionMismatch("polynomial wells need an odd number of roots");
    if (!std::is_sorted(w.roots.begin(), w.roots.end(),
                        [](double a, double b) { return a <= b; }))
        throw DimensionMismatch("polynomial well roots must be strictly increasing");
}

}  // namespace

double potential_force(const PotentialVariant& v, double x, double delta) {
    if (std::holds_alternative<DoubleWell>(v)) return delta * x * (1.0 - x * x);
    if (const auto* w = std::get_if<PolynomialWells>(&v)) {
        check_roots(*w);
        return delta * polynomial_force_unit(*w, x);
    }
    const auto& sw = std::get<SineWells>(v);
    // The shifted sine is used directly as the reaction force; this is the
    // reading under which it has exactly l + 2 stable equilibria in [-1, 1]
    // (l + 1 interior zeros plus one attracting endpoint).
    const double freq = (1.5 + sw.l) * kPi;
    return delta * std::sin(freq * x + 0.5 * kPi);
}

double potential_value(const PotentialVariant& v, double x, double delta) {
    if (std::holds_alternative<DoubleWell>(v)) {
        double q = 1.0 - x * x;
        return 0.25 * delta * q * q;
    }
    if (const auto* w = std::get_if<PolynomialWells>(&v)) {
        check_roots(*w);
        // expand prod (x - r_m) and integrate term-wise
        std::vector<double> coef{1.0};  // ascending powers
        for (double r : w->roots) {
            std::vector<double> next(coef.size() + 1, 0.0);
            for (std::size_t k = 0; k < coef.size(); ++k) {
                next[k + 1] += coef[k];
                next[k] -= r * coef[k];
            }
            coef = std::move(next);
        }
        double val = 0.0;
        for (std::size_t k = coef.size(); k-- > 0;)
            val = val * x + coef[k] / static_cast<double>(k + 1);
        return delta * val * x;
    }
    const auto& sw = std::get<SineWells>(v);
    // Antiderivative of -force: d/dx [-sin(freq x) / freq] = -cos(freq x).
    const double freq = (1.5 + sw.l) * kPi;
    return -delta * std::sin(freq * x) / freq;
}

AcmpParams AcmpParams::scalar(double alpha, double delta, CouplingModel coupling,
                              PotentialVariant potential, bool trapping) {
    AcmpParams p;
    p.alpha = {alpha};
    p.delta = {delta};
    p.coupling = std::move(coupling);
    p.potential = std::move(potential);
    p.trapping = trapping;
    return p;
}

bool AcmpParams::alpha_is_scalar() const {
    for (double a : alpha)
        if (a != alpha.front()) return false;
    return !alpha.empty();
}

namespace {

void check_channel_vectors(const AcmpParams& p, int d) {
    if (static_cast<int>(p.alpha.size()) != d && p.alpha.size() != 1)
        throw DimensionMismatch("alpha length != feature dim");
    if (static_cast<int>(p.delta.size()) != d && p.delta.size() != 1)
        throw DimensionMismatch("delta length != feature dim");
}

double channel(const std::vector<double>& v, int c) { return v.size() == 1 ? v[0] : v[c]; }

Matrix rhs_acmp_impl(const Graph& g, const Matrix& x, const AcmpParams& p,
                     const std::vector<double>& eff, bool trapping) {
    const int n = g.node_count();
    const int d = x.cols();
    Matrix dx(n, d);
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        std::size_t off = g.row_begin(i);
        for (int c = 0; c < d; ++c) {
            double diffusion = 0.0;
            const double xi = x(i, c);
            for (std::size_t k = 0; k < nb.size(); ++k)
                diffusion += eff[off + k] * (x(nb[k], c) - xi);
            if (trapping) {
                const double q = 1.0 - xi * xi;
                diffusion *= q * q;
            }
            dx(i, c) = channel(p.alpha, c) * diffusion +
                       potential_force(p.potential, xi, channel(p.delta, c));
        }
    }
    return dx;
}

}  // namespace

Matrix rhs_acmp(const Graph& g, const Matrix& x, const AcmpParams& p) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    check_channel_vectors(p, x.cols());
    return rhs_acmp_impl(g, x, p, effective_coupling(p.coupling, g, x), p.trapping);
}

Matrix rhs_acmp_gcn(const Graph& g, const Matrix& x, const AcmpParams& p) {
    AcmpParams q = p;
    q.coupling.variant = GcnFixed{};
    return rhs_acmp(g, x, q);
}

Matrix rhs_grand(const Graph& g, const Matrix& x, const CouplingModel& coupling) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    CouplingModel base = coupling;
    base.beta = 0.0;
    base.beta_matrix.reset();
    std::vector<double> a = effective_coupling(base, g, x);
    const int n = g.node_count();
    const int d = x.cols();
    Matrix dx(n, d);
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        std::size_t off = g.row_begin(i);
        for (int c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < nb.size(); ++k)
                s += a[off + k] * (x(nb[k], c) - x(i, c));
            dx(i, c) = s;
        }
    }
    return dx;
}

Matrix rhs_gradient_flow(const Graph& g, const Matrix& x) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    const int n = g.node_count();
    const int d = x.cols();
    const double scale = 4.0 / n;
    Matrix dx(n, d);
    for (int i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        auto w = g.weights(i);
        for (int c = 0; c < d; ++c) {
            double s = 0.0;
            for (std::size_t k = 0; k < nb.size(); ++k)
                s += w[k] * (x(nb[k], c) - x(i, c));
            dx(i, c) = scale * s;
        }
    }
    return dx;
}

Matrix rhs_trapping(const Graph& g, const Matrix& x, const AcmpParams& p) {
    AcmpParams q = p;
    q.trapping = true;
    return rhs_acmp(g, x, q);
}

double pseudo_gl_energy(const Graph& g, const Matrix& x, const AcmpParams& p) {
    if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
    check_channel_vectors(p, x.cols());
    if (!p.alpha_is_scalar())
        throw DimensionMismatch("pseudo-Ginzburg-Landau energy requires scalar alpha");
    const double alpha = p.alpha.front();
    std::vector<double> eff = effective_coupling(p.coupling, g, x);

    double interacting = 0.0;
    for (int i = 0; i < g.node_count(); ++i) {
        auto nb = g.neighbors(i);
        std::size_t off = g.row_begin(i);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            double d2 = 0.0;
            for (int c = 0; c < x.cols(); ++c) {
                const double diff = x(i, c) - x(nb[k], c);
                d2 += diff * diff;
            }
            interacting += eff[off + k] * d2;
        }
    }
    double wells = 0.0;
    for (int i = 0; i < g.node_count(); ++i)
        for (int c = 0; c < x.cols(); ++c)
            wells += potential_value(p.potential, x(i, c), channel(p.delta, c));
    return 0.25 * alpha * interacting + wells;
}

Rhs make_acmp_rhs(const Graph& g, AcmpParams p) {
    if (p.coupling.is_attention()) {
        return [&g, p = std::move(p)](double, const Matrix& x) { return rhs_acmp(g, x, p); };
    }
    // fixed coupling: evaluate the table once against an empty state
    Matrix dummy(g.node_count(), 1);
    std::vector<double> eff = effective_coupling(p.coupling, g, dummy);
    return [&g, p = std::move(p), eff = std::move(eff)](double, const Matrix& x) {
        if (x.rows() != g.node_count()) throw DimensionMismatch("feature rows != node count");
        check_channel_vectors(p, x.cols());
        return rhs_acmp_impl(g, x, p, eff, p.trapping);
    };
}

Rhs make_grand_rhs(const Graph& g, CouplingModel coupling) {
    return [&g, coupling = std::move(coupling)](double, const Matrix& x) {
        return rhs_grand(g, x, coupling);
    };
}

Rhs make_gradient_flow_rhs(const Graph& g) {
    return [&g](double, const Matrix& x) { return rhs_gradient_flow(g, x); };
}

}  // namespace acmp
