#ifndef ACMP_DYNAMICS_HPP
#define ACMP_DYNAMICS_HPP

#include <functional>
#include <variant>
#include <vector>

#include "acmp/coupling.hpp"
#include "acmp/graph.hpp"
#include "acmp/matrix.hpp"

namespace acmp {

// Stable wells at +-1, unstable equilibrium at 0.
struct DoubleWell {};

// Force -delta * prod_m (x - r_m) over strictly increasing roots
// r_0 < ... < r_{2k}; the leading sign makes even-indexed roots stable.
struct PolynomialWells {
    std::vector<double> roots;
};

// Potential sin((3/2 + l) pi x + pi/2) on [-1, 1]; l + 2 stable equilibria.
struct SineWells {
    int l = 0;
};

using PotentialVariant = std::variant<DoubleWell, PolynomialWells, SineWells>;

// -delta * W'(x); for the double well this is delta * x * (1 - x^2)
double potential_force(const PotentialVariant& v, double x, double delta);
// delta-scaled well potential W(x), with W the antiderivative matching
// potential_force = -W'
double potential_value(const PotentialVariant& v, double x, double delta);

struct AcmpParams {
    std::vector<double> alpha;  // per channel
    std::vector<double> delta;  // per channel
    CouplingModel coupling;
    PotentialVariant potential = DoubleWell{};
    bool trapping = false;

    static AcmpParams scalar(double alpha, double delta, CouplingModel coupling,
                             PotentialVariant potential = DoubleWell{}, bool trapping = false);
    bool alpha_is_scalar() const;
};

// dx_i/dt = alpha (.) sum_j (a(x_i,x_j) - beta)(x_j - x_i)
//           + delta (.) x_i (.) (1 - x_i (.) x_i)
Matrix rhs_acmp(const Graph& g, const Matrix& x, const AcmpParams& p);

// rhs_acmp with the coupling fixed to GcnFixed (beta taken from p.coupling)
Matrix rhs_acmp_gcn(const Graph& g, const Matrix& x, const AcmpParams& p);

// dx_i/dt = sum_j a(x_i,x_j)(x_j - x_i)
Matrix rhs_grand(const Graph& g, const Matrix& x, const CouplingModel& coupling);

// Exact negative gradient of dirichlet_energy:
// dx_i/dt = (4/N) sum_j a_ij (x_j - x_i). The double sum in the energy
// counts every edge twice, which doubles the textbook 2/N prefactor.
Matrix rhs_gradient_flow(const Graph& g, const Matrix& x);

// Diffusion damped by (1 - x_i^2)^2 channel-wise; wells become absorbing.
Matrix rhs_trapping(const Graph& g, const Matrix& x, const AcmpParams& p);

// Interacting energy plus summed well potentials, for scalar alpha:
//   Phi(x) = (alpha/4) sum_i sum_{j in N_i} (a_ij - beta_ij) |x_i - x_j|^2
//            + sum_i sum_c W(x_ic)
// normalized so that rhs_acmp == -grad Phi exactly for feature-independent
// couplings. May be negative when repulsion dominates.
double pseudo_gl_energy(const Graph& g, const Matrix& x, const AcmpParams& p);

using Rhs = std::function<Matrix(double, const Matrix&)>;

// Bundles graph + params into a time-stepping right-hand side. Fixed
// couplings (GcnFixed, ExplicitMatrix) are computed once and cached;
// attention is recomputed at every evaluation.
Rhs make_acmp_rhs(const Graph& g, AcmpParams p);
Rhs make_grand_rhs(const Graph& g, CouplingModel coupling);
Rhs make_gradient_flow_rhs(const Graph& g);

}  // namespace acmp

#endif
