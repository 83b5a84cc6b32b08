#pragma once

#include "hht/system.hpp"
#include "hht/types.hpp"

#include <algorithm>
#include <cmath>
#include <span>

namespace hht {

// Embedded Dormand-Prince 5(4) pair with error-per-step control. Serves as
// the independent in-repo baseline the iterative schemes are checked against.

template <class M>
struct Rk45StepResult {
    typename M::State state;
    double error = 0.0;   // scaled error estimate of the attempted step
    double dt_next = 0.0; // controller proposal for the next attempt
};

namespace dp5 {

inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                        e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

} // namespace dp5

// One embedded step attempt of size dt. The caller accepts when error <= 1.
template <OdeSystem M>
Rk45StepResult<M> step_rk45(const M& m, const typename M::State& u, double dt, double tol) {
    using namespace dp5;
    using State = typename M::State;
    const State k1 = m.rhs(u);
    const State k2 = m.rhs(State(u + dt * (a21 * k1)));
    const State k3 = m.rhs(State(u + dt * (a31 * k1 + a32 * k2)));
    const State k4 = m.rhs(State(u + dt * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = m.rhs(State(u + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 = m.rhs(State(u + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    const State u_next = u + dt * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = m.rhs(u_next);
    const State err_vec =
        dt * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (int i = 0; i < M::dimension; ++i) {
        const double scale = tol + tol * std::max(std::abs(u[i]), std::abs(u_next[i]));
        const double q = err_vec[i] / scale;
        err += q * q;
    }
    err = std::sqrt(err / M::dimension);

    const double factor = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    Rk45StepResult<M> r;
    r.state = u_next;
    r.error = err;
    r.dt_next = dt * std::clamp(factor, 0.2, 5.0);
    return r;
}

// Integrates [0, T]; the final step is clipped to land on T exactly. The
// observer sees every accepted point.
template <OdeSystem M, class Observer>
void integrate_rk45_observe(const M& m, const typename M::State& u0, double T, double tol,
                            Observer&& observe, double dt_initial = 1e-3) {
    if (!(tol > 0.0)) throw ConfigError("rk45 tolerance must be positive");
    observe(0.0, u0);
    typename M::State u = u0;
    double t = 0.0;
    double dt = std::min(dt_initial, T);
    while (t < T * (1.0 - 1e-14)) {
        bool clipped = false;
        if (t + dt > T) {
            dt = T - t;
            clipped = true;
        }
        const auto r = step_rk45(m, u, dt, tol);
        if (!all_finite<M::dimension>(r.state)) {
            throw NumericsError("rk45 produced a non-finite state", t);
        }
        if (r.error <= 1.0) {
            t = clipped ? T : t + dt;
            u = r.state;
            observe(t, u);
        }
        dt = std::min(r.dt_next, T);
        if (dt < 1e-14) {
            throw NumericsError("rk45 step size underflow", t);
        }
    }
}

template <OdeSystem M>
Trajectory<M::dimension> integrate_rk45(const M& m, const typename M::State& u0, double T,
                                        double tol, double dt_initial = 1e-3) {
    Trajectory<M::dimension> traj;
    integrate_rk45_observe(m, u0, T, tol,
                           [&](double t, const typename M::State& u) {
                               traj.append(t, u, StepMeta{0, true, 0.0});
                           },
                           dt_initial);
    return traj;
}

// Reference states at prescribed times: steps are clipped so each requested
// time is hit exactly, with no interpolation. `times` must be nondecreasing
// and start at >= 0.
template <OdeSystem M>
std::vector<typename M::State> rk45_states_at(const M& m, const typename M::State& u0,
                                              std::span<const double> times, double tol) {
    std::vector<typename M::State> out;
    out.reserve(times.size());
    typename M::State u = u0;
    double t = 0.0;
    double dt = 1e-3;
    for (double target : times) {
        if (target < t - 1e-12) throw ConfigError("rk45 sample times must be nondecreasing");
        while (t < target * (1.0 - 1e-14)) {
            bool clipped = false;
            if (t + dt > target) {
                dt = target - t;
                clipped = true;
            }
            const auto r = step_rk45(m, u, dt, tol);
            if (!all_finite<M::dimension>(r.state)) {
                throw NumericsError("rk45 produced a non-finite state", t);
            }
            if (r.error <= 1.0) {
                t = clipped ? target : t + dt;
                u = r.state;
            }
            dt = r.dt_next;
            if (dt < 1e-14) throw NumericsError("rk45 step size underflow", t);
        }
        t = target;
        out.push_back(u);
    }
    return out;
}

} // namespace hht
