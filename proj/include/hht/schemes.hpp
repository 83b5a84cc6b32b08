#pragma once

#include "hht/fixed_point.hpp"
#include "hht/system.hpp"
#include "hht/types.hpp"

#include <string>
#include <string_view>
#include <utility>

namespace hht {

struct FixedStepSettings {
    double dt = 0.01;
    double T = 1.0;
    double eps_fp = 1e-7;
    int max_fp_iters = 10;        // cap on each scheme's fixed-point loop
    int max_corrector_iters = 10; // cap on the RK4 corrector loop
};

enum class Scheme { isie, icn, isv, mmrk4, irk4, rk45_baseline };

inline std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::isie: return "isie";
        case Scheme::icn: return "icn";
        case Scheme::isv: return "isv";
        case Scheme::mmrk4: return "mmrk4";
        case Scheme::irk4: return "irk4";
        case Scheme::rk45_baseline: return "rk45-baseline";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view name) {
    for (Scheme s : {Scheme::isie, Scheme::icn, Scheme::isv, Scheme::mmrk4, Scheme::irk4,
                     Scheme::rk45_baseline}) {
        if (name == scheme_name(s)) return s;
    }
    throw ConfigError("unknown solver id '" + std::string(name) +
                      "' (valid: isie, icn, isv, mmrk4, irk4, rk45-baseline)");
}

template <class M>
struct StepResult {
    typename M::State state;
    StepMeta meta;
};

// Solves a = a_base + dt_eff * f2(x_eval, a). Exact for affine activation
// blocks, Picard fallback otherwise.
template <SplitSystem M>
typename M::Activations solve_activation(const M& m, const typename M::Activations& a_base,
                                         double x_eval, double dt_eff, double eps_fp,
                                         int max_iter) {
    if (dt_eff == 0.0) return a_base;
    if constexpr (ClosedFormActivation<M>) {
        return m.implicit_activation_update(a_base, x_eval, dt_eff);
    } else {
        auto map = [&](const typename M::Activations& a) {
            return typename M::Activations(a_base + dt_eff * m.activation_rates(x_eval, a));
        };
        return fixed_point_iterate(map, a_base, eps_fp, max_iter).value;
    }
}

namespace detail {

template <class M>
void require_finite(const typename M::State& u, const char* scheme) {
    if (!all_finite<M::dimension>(u)) {
        throw NumericsError(std::string(scheme) + " produced a non-finite state");
    }
}

} // namespace detail

// Semi-implicit Euler embedded in a Picard loop: the observable advances on
// the previous iterate, the activation block is solved implicitly at the new
// observable level.
template <SplitSystem M>
StepResult<M> step_isie(const M& m, const typename M::State& u_n, double dt,
                        const FixedStepSettings& s) {
    const double x_n = u_n[0];
    const typename M::Activations a_n = activation_block<M>(u_n);
    typename M::State prev = u_n;
    StepMeta meta{0, false, dt};
    for (int i = 1; i <= s.max_fp_iters; ++i) {
        const double x_i = x_n + dt * m.observable_rate(prev) + dt * m.source_rate();
        const typename M::Activations a_i =
            solve_activation(m, a_n, x_i, dt, s.eps_fp, s.max_fp_iters);
        const typename M::State cur = compose_state<M>(x_i, a_i);
        detail::require_finite<M>(cur, "isie");
        const double diff = (cur - prev).norm();
        prev = cur;
        meta.iterations = i;
        if (diff <= s.eps_fp) {
            meta.converged = true;
            break;
        }
    }
    return {prev, meta};
}

// Crank-Nicolson embedded in a Picard loop. The trapezoidal half at t^n is
// frozen; the implicit half solves the activation block in closed form with
// effective step dt/2.
template <SplitSystem M>
StepResult<M> step_icn(const M& m, const typename M::State& u_n, double dt,
                       const FixedStepSettings& s) {
    const double x_n = u_n[0];
    const typename M::Activations a_n = activation_block<M>(u_n);
    const double f1_n = m.observable_rate(u_n);
    const typename M::Activations a_base =
        typename M::Activations(a_n + (dt / 2.0) * m.activation_rates(x_n, a_n));
    typename M::State prev = u_n;
    StepMeta meta{0, false, dt};
    for (int i = 1; i <= s.max_fp_iters; ++i) {
        const double x_i = x_n + (dt / 2.0) * (m.observable_rate(prev) + f1_n)
                         + dt * m.source_rate();
        const typename M::Activations a_i =
            solve_activation(m, a_base, x_i, dt / 2.0, s.eps_fp, s.max_fp_iters);
        const typename M::State cur = compose_state<M>(x_i, a_i);
        detail::require_finite<M>(cur, "icn");
        const double diff = (cur - prev).norm();
        prev = cur;
        meta.iterations = i;
        if (diff <= s.eps_fp) {
            meta.converged = true;
            break;
        }
    }
    return {prev, meta};
}

// Stoermer-Verlet: observable half-step, implicit activation full step at the
// midpoint level, observable half-step. The activation stage is solved
// exactly, so the scheme runs once per step.
template <SplitSystem M>
StepResult<M> step_isv(const M& m, const typename M::State& u_n, double dt,
                       const FixedStepSettings& s) {
    const double half = dt / 2.0;
    const double src = m.source_rate();
    const typename M::Activations a_n = activation_block<M>(u_n);

    const double x_half = u_n[0] + half * m.observable_rate(u_n) + half * src;
    const typename M::Activations a_next =
        solve_activation(m, a_n, x_half, dt, s.eps_fp, s.max_fp_iters);
    const typename M::State u_mid = compose_state<M>(x_half, a_next);
    const double x_next = x_half + half * m.observable_rate(u_mid) + half * src;

    const typename M::State u_next = compose_state<M>(x_next, a_next);
    detail::require_finite<M>(u_next, "isv");
    return {u_next, StepMeta{1, true, dt}};
}

// Four-stage predictor-corrector on the full right-hand side; algebraically
// the classical RK4 stage structure.
template <OdeSystem M>
StepResult<M> step_mmrk4(const M& m, const typename M::State& u_n, double dt,
                         const FixedStepSettings&) {
    using State = typename M::State;
    const State f_n = m.rhs(u_n);
    const State u_tilde_half = u_n + (dt / 2.0) * f_n;
    const State f_tilde_half = m.rhs(u_tilde_half);
    const State u_hat_half = u_n + (dt / 2.0) * f_tilde_half;
    const State f_hat_half = m.rhs(u_hat_half);
    const State u_tilde_next = u_n + dt * f_hat_half;
    const State u_next =
        u_n + (dt / 6.0) * (f_n + 2.0 * f_tilde_half + 2.0 * f_hat_half + m.rhs(u_tilde_next));
    detail::require_finite<M>(u_next, "mmrk4");
    return {u_next, StepMeta{1, true, dt}};
}

// Iterated Crank-Nicolson predictor to the half point, iterated Simpson
// corrector to the full point.
template <OdeSystem M>
StepResult<M> step_irk4(const M& m, const typename M::State& u_n, double dt,
                        const FixedStepSettings& s) {
    using State = typename M::State;
    const State f_n = m.rhs(u_n);
    StepMeta meta{0, false, dt};

    State pred = u_n;
    bool pred_converged = false;
    for (int i = 1; i <= s.max_fp_iters; ++i) {
        const State next = u_n + (dt / 4.0) * (f_n + m.rhs(pred));
        detail::require_finite<M>(next, "irk4");
        const double diff = (next - pred).norm();
        pred = next;
        ++meta.iterations;
        if (diff <= s.eps_fp) {
            pred_converged = true;
            break;
        }
    }

    const State f_half = m.rhs(pred);
    State cor = u_n;
    bool cor_converged = false;
    for (int j = 1; j <= s.max_corrector_iters; ++j) {
        const State next = u_n + (dt / 6.0) * (f_n + 4.0 * f_half + m.rhs(cor));
        detail::require_finite<M>(next, "irk4");
        const double diff = (next - cor).norm();
        cor = next;
        ++meta.iterations;
        if (diff <= s.eps_fp) {
            cor_converged = true;
            break;
        }
    }

    meta.converged = pred_converged && cor_converged;
    return {cor, meta};
}

template <SplitSystem M>
StepResult<M> step_scheme(const M& m, Scheme scheme, const typename M::State& u_n, double dt,
                          const FixedStepSettings& s) {
    switch (scheme) {
        case Scheme::isie: return step_isie(m, u_n, dt, s);
        case Scheme::icn: return step_icn(m, u_n, dt, s);
        case Scheme::isv: return step_isv(m, u_n, dt, s);
        case Scheme::mmrk4: return step_mmrk4(m, u_n, dt, s);
        case Scheme::irk4: return step_irk4(m, u_n, dt, s);
        case Scheme::rk45_baseline:
            throw ConfigError("rk45-baseline is driven by its own error control; "
                              "use integrate_rk45");
    }
    throw ConfigError("unknown scheme");
}

// Fixed-grid driver. Times are n*dt, so halved-step grids nest exactly.
// The observer receives every accepted point including t=0.
template <SplitSystem M, class Observer>
void integrate_observe(const M& m, Scheme scheme, const typename M::State& u0,
                       const FixedStepSettings& s, Observer&& observe) {
    if (!(s.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(s.T > 0.0)) throw ConfigError("T must be positive");
    if (!all_finite<M::dimension>(u0)) throw ConfigError("initial state must be finite");

    observe(0.0, u0, StepMeta{0, true, 0.0});
    typename M::State u = u0;
    long n = 0;
    double t = 0.0;
    while (t < s.T * (1.0 - 1e-12)) {
        ++n;
        t = static_cast<double>(n) * s.dt;
        StepResult<M> r;
        try {
            r = step_scheme(m, scheme, u, s.dt, s);
        } catch (const NumericsError& e) {
            throw NumericsError(std::string(e.what()) + " at t=" + std::to_string(t), t);
        }
        u = r.state;
        observe(t, u, r.meta);
    }
}

template <SplitSystem M>
Trajectory<M::dimension> integrate(const M& m, Scheme scheme, const typename M::State& u0,
                                   const FixedStepSettings& s) {
    Trajectory<M::dimension> traj;
    traj.times.reserve(static_cast<std::size_t>(s.T / s.dt) + 2);
    traj.states.reserve(traj.times.capacity());
    traj.step_meta.reserve(traj.times.capacity());
    integrate_observe(m, scheme, u0, s,
                      [&](double t, const typename M::State& u, const StepMeta& meta) {
                          traj.append(t, u, meta);
                      });
    return traj;
}

} // namespace hht
