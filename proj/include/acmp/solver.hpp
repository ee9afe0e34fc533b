#ifndef ACMP_SOLVER_HPP
#define ACMP_SOLVER_HPP

#include <functional>
#include <vector>

#include "acmp/dynamics.hpp"
#include "acmp/matrix.hpp"

namespace acmp {

enum class Method { Euler, Midpoint, Rk4, Dopri5 };

struct SolverSpec {
    Method method = Method::Dopri5;
    double step = 1e-2;        // fixed-step methods
    double atol = 1e-7;        // Dopri5
    double rtol = 1e-5;        // Dopri5
    double t_end = 1.0;
    double sample_every = 0.1;
    long max_steps = 1000000;
    double safety = 0.9;
    double min_factor = 0.2;
    double max_factor = 10.0;
    // Truncate-and-flag threshold on max |component|. Divergence is a
    // reportable outcome, not an error; non-finite values always trip it.
    double blowup_threshold = 1e10;
};

struct SolverStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evals = 0;
};

struct Trajectory {
    std::vector<double> times;   // strictly increasing, starts at 0
    std::vector<Matrix> states;  // one per time
    SolverStats stats;
    bool blew_up = false;  // truncated at the last state within bounds

    const Matrix& final_state() const { return states.back(); }
    double final_time() const { return times.back(); }
};

using Observer = std::function<void(double, const Matrix&)>;

// Integrates dx/dt = rhs(t, x) from x0 over [0, t_end]. Samples snap to
// the step endpoint nearest each multiple of sample_every; the last step
// is shortened to land exactly on t_end. No dense-output interpolation.
Trajectory integrate(const Rhs& rhs, const Matrix& x0, const SolverSpec& spec);

// As integrate, with the observer invoked once per recorded sample.
// Observer exceptions abort the run with ObserverError.
Trajectory integrate_with_observer(const Rhs& rhs, const Matrix& x0, const SolverSpec& spec,
                                   const Observer& observer);

}  // namespace acmp

#endif
