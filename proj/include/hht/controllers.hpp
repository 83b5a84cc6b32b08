#pragma once

#include "hht/types.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

namespace hht {

/// ||u_next - u_prev|| / ||u_next|| in the selected norm.
template <int N>
double relative_error(const Vec<N>& u_prev, const Vec<N>& u_next, Norm norm = Norm::absolute) {
    const double denom = norm_of<N>(u_next, norm);
    if (denom == 0.0) {
        throw NumericsError("relative error undefined: ||u_next|| = 0");
    }
    return norm_of<N>(Vec<N>(u_next - u_prev), norm) / denom;
}

struct PidParams {
    double k_p = 0.075;
    double k_i = 0.175;
    double k_d = 0.01;
    double eps_t = 1e-7;
};

// The two parameter sets shipped by name. "default" carries the empirical
// exponents; "hand-tuned" the alternative profile.
inline PidParams pid_profile(std::string_view name) {
    if (name == "default") return PidParams{0.075, 0.175, 0.01, 1e-7};
    if (name == "hand-tuned") return PidParams{0.025, 0.075, 0.01, 1e-7};
    throw ConfigError("unknown PID profile '" + std::string(name) +
                      "' (valid: default, hand-tuned)");
}

struct ControllerState {
    double e_nm2 = 0.0; // e(t^{n-2})
    double e_nm1 = 0.0; // e(t^{n-1})
    double e_n = 0.0;   // e(t^n)
    double dt = 0.0;
    int controlled_steps = 0; // how many errors have been observed

    void push_error(double e) {
        e_nm2 = e_nm1;
        e_nm1 = e_n;
        e_n = e;
        ++controlled_steps;
    }
};

struct StepClamps {
    double dt_min = 1e-10;
    double dt_max = 10.0;
    double growth_cap = 5.0; // max ratio dt_next / dt
};

inline double clamp_step(double dt_proposed, double dt_current, const StepClamps& c) {
    const double capped = std::min(dt_proposed, c.growth_cap * dt_current);
    return std::clamp(capped, c.dt_min, c.dt_max);
}

// dt_{n+1} = (e_{n-1}/e_n)^kP * (eps_t/e_n)^kI * (e_{n-1}^2/(e_n e_{n-2}))^kD * dt_n.
// The first controlled step applies only the I factor, the second I and P,
// all later steps the full product. Non-positive history entries fall back to
// the I-only form with the current error floored away from zero.
inline double pid_next_step(const ControllerState& ctrl, const PidParams& p,
                            const StepClamps& clamps) {
    constexpr double error_floor = 1e-300;
    const double e_n = std::max(ctrl.e_n, error_floor);

    const bool p_ready = ctrl.controlled_steps >= 2;
    const bool d_ready = ctrl.controlled_steps >= 3;
    const bool history_valid = (!p_ready || ctrl.e_nm1 > 0.0) && (!d_ready || ctrl.e_nm2 > 0.0);

    double factor = std::pow(p.eps_t / e_n, p.k_i);
    if (history_valid && p_ready) {
        factor *= std::pow(ctrl.e_nm1 / e_n, p.k_p);
    }
    if (history_valid && d_ready) {
        factor *= std::pow(ctrl.e_nm1 * ctrl.e_nm1 / (e_n * ctrl.e_nm2), p.k_d);
    }
    return clamp_step(factor * ctrl.dt, ctrl.dt, clamps);
}

// Step-doubling controller for second-order schemes:
// dt* = sqrt(eps_t * dt^2 * (m^2-1) / ||u_dt - u_{dt/m}||).
inline double richardson_step_order2(double dt, int m, double diff_norm, double eps_t,
                                     const StepClamps& clamps) {
    if (!(dt > 0.0) || m < 2) throw ConfigError("richardson controller requires dt > 0, m >= 2");
    if (diff_norm <= 0.0) return clamps.dt_max;
    const double dm = static_cast<double>(m);
    const double dt_star = std::sqrt(eps_t * dt * dt * (dm * dm - 1.0) / diff_norm);
    return std::clamp(dt_star, clamps.dt_min, clamps.dt_max);
}

// Fourth-order analogue: dt* = (eps_t * dt^4 * (m^4-1) / ||.||)^(1/4).
inline double richardson_step_order4(double dt, int m, double diff_norm, double eps_t,
                                     const StepClamps& clamps) {
    if (!(dt > 0.0) || m < 2) throw ConfigError("richardson controller requires dt > 0, m >= 2");
    if (diff_norm <= 0.0) return clamps.dt_max;
    const double dm = static_cast<double>(m);
    const double dt_star =
        std::pow(eps_t * std::pow(dt, 4) * (dm * dm * dm * dm - 1.0) / diff_norm, 0.25);
    return std::clamp(dt_star, clamps.dt_min, clamps.dt_max);
}

} // namespace hht
