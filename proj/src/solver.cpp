#include "acmp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "acmp/errors.hpp"

namespace acmp {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-minus-4th order error weights
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct Recorder {
    Trajectory traj;
    const Observer* observer;
    double sample_every;
    long sample_index = 1;  // next multiple of sample_every to snap

    void record(double t, const Matrix& x) {
        traj.times.push_back(t);
        traj.states.push_back(x);
        if (observer && *observer) {
            try {
                (*observer)(t, x);
            } catch (const std::exception& e) {
                throw ObserverError(std::string("observer failed: ") + e.what());
            }
        }
    }

    // snap pending sample targets in (t_old, t_new] to the nearer endpoint
    void on_step(double t_old, const Matrix& x_old, double t_new, const Matrix& x_new) {
        if (!(sample_every > 0.0)) return;
        while (true) {
            const double target = sample_index * sample_every;
            if (target > t_new) break;
            ++sample_index;
            const bool old_closer = (target - t_old) <= (t_new - target);
            const double t_pick = old_closer ? t_old : t_new;
            if (t_pick > traj.times.back()) record(t_pick, old_closer ? x_old : x_new);
        }
    }
};

void validate(const Matrix& x0, const SolverSpec& spec) {
    if (!x0.all_finite()) throw ConfigError("initial state is not finite");
    if (!(spec.t_end > 0.0)) throw ConfigError("t_end must be > 0");
    if (spec.max_steps < 1) throw ConfigError("max_steps must be >= 1");
    if (spec.method == Method::Dopri5) {
        if (!(spec.atol > 0.0) || !(spec.rtol > 0.0))
            throw ConfigError("atol and rtol must be > 0");
    } else if (!(spec.step > 0.0)) {
        throw ConfigError("fixed step must be > 0");
    }
}

bool within_bounds(const Matrix& x, double threshold) {
    return x.all_finite() && x.max_abs() <= threshold;
}

Matrix fixed_step(const Rhs& rhs, double t, const Matrix& x, double h, Method m,
                  SolverStats& st) {
    switch (m) {
        case Method::Euler: {
            Matrix k1 = rhs(t, x);
            st.rhs_evals += 1;
            Matrix y = x;
            y.add_scaled(k1, h);
            return y;
        }
        case Method::Midpoint: {
            Matrix k1 = rhs(t, x);
            Matrix mid = x;
            mid.add_scaled(k1, 0.5 * h);
            Matrix k2 = rhs(t + 0.5 * h, mid);
            st.rhs_evals += 2;
            Matrix y = x;
            y.add_scaled(k2, h);
            return y;
        }
        case Method::Rk4:
        default: {
            Matrix k1 = rhs(t, x);
            Matrix s = x;
            s.add_scaled(k1, 0.5 * h);
            Matrix k2 = rhs(t + 0.5 * h, s);
            s = x;
            s.add_scaled(k2, 0.5 * h);
            Matrix k3 = rhs(t + 0.5 * h, s);
            s = x;
            s.add_scaled(k3, h);
            Matrix k4 = rhs(t + h, s);
            st.rhs_evals += 4;
            Matrix y = x;
            y.add_scaled(k1, h / 6.0);
            y.add_scaled(k2, h / 3.0);
            y.add_scaled(k3, h / 3.0);
            y.add_scaled(k4, h / 6.0);
            return y;
        }
    }
}

Trajectory run_fixed(const Rhs& rhs, const Matrix& x0, const SolverSpec& spec, Recorder& rec) {
    double t = 0.0;
    Matrix x = x0;
    long steps = 0;
    while (t < spec.t_end) {
        if (++steps > spec.max_steps) throw MaxStepsExceeded("fixed-step iteration cap hit");
        const double h = std::min(spec.step, spec.t_end - t);
        Matrix x_new = fixed_step(rhs, t, x, h, spec.method, rec.traj.stats);
        const double t_new = (spec.t_end - t <= spec.step) ? spec.t_end : t + h;
        if (!within_bounds(x_new, spec.blowup_threshold)) {
            rec.traj.blew_up = true;
            if (t > rec.traj.times.back()) rec.record(t, x);
            return std::move(rec.traj);
        }
        ++rec.traj.stats.accepted;
        rec.on_step(t, x, t_new, x_new);
        t = t_new;
        x = std::move(x_new);
    }
    if (spec.t_end > rec.traj.times.back()) rec.record(spec.t_end, x);
    return std::move(rec.traj);
}

Trajectory run_dopri5(const Rhs& rhs, const Matrix& x0, const SolverSpec& spec, Recorder& rec) {
    double t = 0.0;
    Matrix x = x0;
    double h = std::min(1e-2, spec.t_end / 100.0);
    Matrix k1 = rhs(t, x);
    rec.traj.stats.rhs_evals += 1;
    long steps = 0;
    const double inf = std::numeric_limits<double>::infinity();

    while (t < spec.t_end) {
        if (++steps > spec.max_steps) throw MaxStepsExceeded("adaptive step cap hit");
        if (h < 1e-14 * spec.t_end) throw StepUnderflow("adaptive step size underflow");
        const bool landing = (spec.t_end - t) <= h;
        if (landing) h = spec.t_end - t;

        Matrix s = x;
        s.add_scaled(k1, h * a21);
        Matrix k2 = rhs(t + c2 * h, s);
        s = x;
        s.add_scaled(k1, h * a31);
        s.add_scaled(k2, h * a32);
        Matrix k3 = rhs(t + c3 * h, s);
        s = x;
        s.add_scaled(k1, h * a41);
        s.add_scaled(k2, h * a42);
        s.add_scaled(k3, h * a43);
        Matrix k4 = rhs(t + c4 * h, s);
        s = x;
        s.add_scaled(k1, h * a51);
        s.add_scaled(k2, h * a52);
        s.add_scaled(k3, h * a53);
        s.add_scaled(k4, h * a54);
        Matrix k5 = rhs(t + c5 * h, s);
        s = x;
        s.add_scaled(k1, h * a61);
        s.add_scaled(k2, h * a62);
        s.add_scaled(k3, h * a63);
        s.add_scaled(k4, h * a64);
        s.add_scaled(k5, h * a65);
        Matrix k6 = rhs(t + h, s);
        Matrix x5 = x;
        x5.add_scaled(k1, h * b1);
        x5.add_scaled(k3, h * b3);
        x5.add_scaled(k4, h * b4);
        x5.add_scaled(k5, h * b5);
        x5.add_scaled(k6, h * b6);
        Matrix k7 = rhs(t + h, x5);
        rec.traj.stats.rhs_evals += 6;

        // component-count-normalized RMS of the embedded error
        double sum_sq = 0.0;
        bool finite = true;
        for (std::size_t idx = 0; idx < x.size(); ++idx) {
            const double err_k = h * (e1 * k1.data()[idx] + e3 * k3.data()[idx] +
                                      e4 * k4.data()[idx] + e5 * k5.data()[idx] +
                                      e6 * k6.data()[idx] + e7 * k7.data()[idx]);
            const double scale =
                spec.atol +
                spec.rtol * std::max(std::abs(x.data()[idx]), std::abs(x5.data()[idx]));
            const double r = err_k / scale;
            if (!std::isfinite(r)) finite = false;
            sum_sq += r * r;
        }
        const double err = finite ? std::sqrt(sum_sq / static_cast<double>(x.size())) : inf;

        const double factor =
            err > 0.0 ? std::clamp(spec.safety * std::pow(err, -0.2), spec.min_factor,
                                   spec.max_factor)
                      : spec.max_factor;
        if (err <= 1.0) {
            const double t_new = landing ? spec.t_end : t + h;
            if (!within_bounds(x5, spec.blowup_threshold)) {
                rec.traj.blew_up = true;
                if (t > rec.traj.times.back()) rec.record(t, x);
                return std::move(rec.traj);
            }
            ++rec.traj.stats.accepted;
            rec.on_step(t, x, t_new, x5);
            t = t_new;
            x = std::move(x5);
            k1 = std::move(k7);
        } else {
            ++rec.traj.stats.rejected;
        }
        h *= factor;
    }
    if (spec.t_end > rec.traj.times.back()) rec.record(spec.t_end, x);
    return std::move(rec.traj);
}

}  // namespace

Trajectory integrate_with_observer(const Rhs& rhs, const Matrix& x0, const SolverSpec& spec,
                                   const Observer& observer) {
    validate(x0, spec);
    Recorder rec;
    rec.observer = &observer;
    rec.sample_every = spec.sample_every;
    rec.record(0.0, x0);
    if (spec.method == Method::Dopri5) return run_dopri5(rhs, x0, spec, rec);
    return run_fixed(rhs, x0, spec, rec);
}

Trajectory integrate(const Rhs& rhs, const Matrix& x0, const SolverSpec& spec) {
    return integrate_with_observer(rhs, x0, spec, Observer{});
}

}  // namespace acmp
