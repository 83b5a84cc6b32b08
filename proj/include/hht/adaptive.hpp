#pragma once

#include "hht/controllers.hpp"
#include "hht/schemes.hpp"
#include "hht/system.hpp"
#include "hht/types.hpp"

#include <utility>

namespace hht {

struct AdaptiveSettings {
    double dt0 = 0.01;
    double T = 1.0;
    double eps_t = 1e-7;
    double eps_fp = 1e-7;
    int substeps = 2; // m small steps against one large step
    int max_fp_iters = 10;
    int max_corrector_iters = 10;
    double dt_min = 1e-10;
    double dt_max = 10.0;
    double safety = 1.0;
    double growth_cap = 5.0;

    StepClamps clamps() const { return StepClamps{dt_min, dt_max, growth_cap}; }
    FixedStepSettings step_settings() const {
        return FixedStepSettings{dt0, T, eps_fp, max_fp_iters, max_corrector_iters};
    }
};

// PID-controlled Crank-Nicolson: every step is accepted and the step size is
// rescaled afterwards from the relative-error history.
template <SplitSystem M, class Observer>
void integrate_pidicn_observe(const M& m, const typename M::State& u0,
                              const AdaptiveSettings& s, const PidParams& pid,
                              Observer&& observe) {
    if (!(s.dt0 > 0.0)) throw ConfigError("dt0 must be positive");
    const FixedStepSettings step_cfg = s.step_settings();
    const StepClamps clamps = s.clamps();

    observe(0.0, u0, AdaptiveStepMeta{{0, true, 0.0}, 0.0, true, 0});
    typename M::State u = u0;
    double t = 0.0;
    double dt = s.dt0;
    ControllerState ctrl;
    while (t < s.T * (1.0 - 1e-12)) {
        if (dt < s.dt_min) throw NumericsError("pidicn step size underflow", t);
        const auto r = step_icn(m, u, dt, step_cfg);
        const double e = relative_error<M::dimension>(u, r.state);
        t += dt;
        u = r.state;
        ctrl.dt = dt;
        ctrl.push_error(e);
        const double dt_next = pid_next_step(ctrl, pid, clamps);
        observe(t, u, AdaptiveStepMeta{{r.meta.iterations, r.meta.converged, dt},
                                       dt_next, true, 0});
        dt = dt_next;
    }
}

namespace detail {

// Shared accept/reject loop of the step-doubling controllers: one large step
// against `substeps` small ones, dt* from the Richardson formula, accept iff
// dt <= dt*. The stored state is the large-step result.
template <SplitSystem M, class StepFn, class Controller, class Observer>
void drive_step_doubling(const M&, const typename M::State& u0, const AdaptiveSettings& s,
                         StepFn&& step, Controller&& dt_star_of, Observer&& observe,
                         const char* name) {
    if (!(s.dt0 > 0.0)) throw ConfigError("dt0 must be positive");
    if (s.substeps < 2) throw ConfigError("substep count m must be >= 2");
    const StepClamps clamps = s.clamps();

    observe(0.0, u0, AdaptiveStepMeta{{0, true, 0.0}, 0.0, true, 0});
    typename M::State u = u0;
    double t = 0.0;
    double dt = s.dt0;
    while (t < s.T * (1.0 - 1e-12)) {
        int rejections = 0;
        for (;;) {
            const StepResult<M> big = step(u, dt);
            typename M::State v = u;
            const double sub_dt = dt / s.substeps;
            for (int k = 0; k < s.substeps; ++k) {
                v = step(v, sub_dt).state;
            }
            const double diff = (big.state - v).norm();
            const double dt_star = dt_star_of(dt, s.substeps, diff);

            if (dt <= dt_star) {
                t += dt;
                u = big.state;
                observe(t, u, AdaptiveStepMeta{{big.meta.iterations, big.meta.converged, dt},
                                               dt_star, true, rejections});
                dt = clamp_step(s.safety * dt_star, dt, clamps);
                break;
            }
            if (dt <= s.dt_min * (1.0 + 1e-12)) {
                throw NumericsError(std::string(name) +
                                        ": tolerance unreachable at the minimum step size",
                                    t);
            }
            ++rejections;
            dt = clamp_step(s.safety * dt_star, dt, clamps);
        }
    }
}

} // namespace detail

namespace detail {

// The accept test compares against the raw proposal: clamping dt* up to
// dt_min would otherwise mask an unreachable tolerance at the step floor.
inline StepClamps accept_clamps(const AdaptiveSettings& s) {
    return StepClamps{0.0, s.dt_max, s.growth_cap};
}

} // namespace detail

template <SplitSystem M, class Observer>
void integrate_aicn_observe(const M& m, const typename M::State& u0, const AdaptiveSettings& s,
                            Observer&& observe) {
    const FixedStepSettings step_cfg = s.step_settings();
    detail::drive_step_doubling(
        m, u0, s,
        [&](const typename M::State& u, double dt) { return step_icn(m, u, dt, step_cfg); },
        [&](double dt, int sub, double diff) {
            return richardson_step_order2(dt, sub, diff, s.eps_t, detail::accept_clamps(s));
        },
        std::forward<Observer>(observe), "aicn");
}

template <SplitSystem M, class Observer>
void integrate_ark4_observe(const M& m, const typename M::State& u0, const AdaptiveSettings& s,
                            Observer&& observe) {
    const FixedStepSettings step_cfg = s.step_settings();
    detail::drive_step_doubling(
        m, u0, s,
        [&](const typename M::State& u, double dt) { return step_mmrk4(m, u, dt, step_cfg); },
        [&](double dt, int sub, double diff) {
            return richardson_step_order4(dt, sub, diff, s.eps_t, detail::accept_clamps(s));
        },
        std::forward<Observer>(observe), "ark4");
}

template <SplitSystem M, class Observer>
void integrate_airk4_observe(const M& m, const typename M::State& u0, const AdaptiveSettings& s,
                             Observer&& observe) {
    const FixedStepSettings step_cfg = s.step_settings();
    detail::drive_step_doubling(
        m, u0, s,
        [&](const typename M::State& u, double dt) { return step_irk4(m, u, dt, step_cfg); },
        [&](double dt, int sub, double diff) {
            return richardson_step_order4(dt, sub, diff, s.eps_t, detail::accept_clamps(s));
        },
        std::forward<Observer>(observe), "airk4");
}

enum class AdaptiveScheme { pidicn, aicn, ark4, airk4 };

inline std::string_view adaptive_scheme_name(AdaptiveScheme s) {
    switch (s) {
        case AdaptiveScheme::pidicn: return "pidicn";
        case AdaptiveScheme::aicn: return "aicn";
        case AdaptiveScheme::ark4: return "ark4";
        case AdaptiveScheme::airk4: return "airk4";
    }
    return "?";
}

inline AdaptiveScheme parse_adaptive_scheme(std::string_view name) {
    for (AdaptiveScheme s : {AdaptiveScheme::pidicn, AdaptiveScheme::aicn, AdaptiveScheme::ark4,
                             AdaptiveScheme::airk4}) {
        if (name == adaptive_scheme_name(s)) return s;
    }
    throw ConfigError("unknown adaptive solver id '" + std::string(name) +
                      "' (valid: pidicn, aicn, ark4, airk4)");
}

template <SplitSystem M, class Observer>
void integrate_adaptive_observe(const M& m, AdaptiveScheme scheme, const typename M::State& u0,
                                const AdaptiveSettings& s, const PidParams& pid,
                                Observer&& observe) {
    switch (scheme) {
        case AdaptiveScheme::pidicn:
            integrate_pidicn_observe(m, u0, s, pid, std::forward<Observer>(observe));
            return;
        case AdaptiveScheme::aicn:
            integrate_aicn_observe(m, u0, s, std::forward<Observer>(observe));
            return;
        case AdaptiveScheme::ark4:
            integrate_ark4_observe(m, u0, s, std::forward<Observer>(observe));
            return;
        case AdaptiveScheme::airk4:
            integrate_airk4_observe(m, u0, s, std::forward<Observer>(observe));
            return;
    }
}

template <SplitSystem M>
AdaptiveTrajectory<M::dimension> integrate_adaptive(const M& m, AdaptiveScheme scheme,
                                                    const typename M::State& u0,
                                                    const AdaptiveSettings& s,
                                                    const PidParams& pid = {}) {
    AdaptiveTrajectory<M::dimension> traj;
    integrate_adaptive_observe(
        m, scheme, u0, s, pid,
        [&](double t, const typename M::State& u, const AdaptiveStepMeta& meta) {
            traj.append(t, u, meta);
        });
    return traj;
}

template <SplitSystem M>
AdaptiveTrajectory<M::dimension> integrate_pidicn(const M& m, const typename M::State& u0,
                                                  const AdaptiveSettings& s,
                                                  const PidParams& pid = {}) {
    return integrate_adaptive(m, AdaptiveScheme::pidicn, u0, s, pid);
}

template <SplitSystem M>
AdaptiveTrajectory<M::dimension> integrate_aicn(const M& m, const typename M::State& u0,
                                                const AdaptiveSettings& s) {
    return integrate_adaptive(m, AdaptiveScheme::aicn, u0, s);
}

template <SplitSystem M>
AdaptiveTrajectory<M::dimension> integrate_ark4(const M& m, const typename M::State& u0,
                                                const AdaptiveSettings& s) {
    return integrate_adaptive(m, AdaptiveScheme::ark4, u0, s);
}

template <SplitSystem M>
AdaptiveTrajectory<M::dimension> integrate_airk4(const M& m, const typename M::State& u0,
                                                 const AdaptiveSettings& s) {
    return integrate_adaptive(m, AdaptiveScheme::airk4, u0, s);
}

} // namespace hht
