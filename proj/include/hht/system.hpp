#pragma once

#include "hht/types.hpp"

#include <concepts>
#include <type_traits>

namespace hht {

// An ODE system exposes its dimension, a state alias and the full right-hand
// side (source included).
template <class M>
concept OdeSystem = requires(const M& m, const typename M::State& u) {
    { M::dimension } -> std::convertible_to<int>;
    { m.rhs(u) } -> std::same_as<typename M::State>;
};

// A split system partitions the state into one observable component and a
// block of activation components, with rhs(u) == F1(u) + F2(u) + S:
//   observable_rate   f1, the observable reaction (source excluded)
//   source_rate       the source contribution to the observable derivative
//   activation_rates  f2, the activation block
// Schemes treat the activation block implicitly.
template <class M>
concept SplitSystem = OdeSystem<M> &&
    requires(const M& m, const typename M::State& u,
             const typename M::Activations& a, double x) {
        { m.observable_rate(u) } -> std::convertible_to<double>;
        { m.source_rate() } -> std::convertible_to<double>;
        { m.activation_rates(x, a) } -> std::same_as<typename M::Activations>;
    };

// Affine activation blocks admit an exact one-shot solve of
// a = a_base + dt_eff * f2(x_eval, a).
template <class M>
concept ClosedFormActivation = SplitSystem<M> &&
    requires(const M& m, const typename M::Activations& a, double x, double dt) {
        { m.implicit_activation_update(a, x, dt) } -> std::same_as<typename M::Activations>;
    };

template <class M>
concept HasAnalyticJacobian = OdeSystem<M> &&
    requires(const M& m, const typename M::State& u) {
        { m.jacobian(u) } -> std::same_as<Mat<M::dimension>>;
    };

template <OdeSystem M>
inline double observable(const typename M::State& u) {
    return u[0];
}

template <OdeSystem M>
inline auto activation_block(const typename M::State& u) {
    return u.template tail<M::dimension - 1>();
}

template <OdeSystem M>
inline typename M::State compose_state(double x, const typename M::Activations& a) {
    typename M::State u;
    u[0] = x;
    u.template tail<M::dimension - 1>() = a;
    return u;
}

/// Central finite-difference Jacobian, the fallback and validation oracle for
/// the analytic forms.
template <OdeSystem M>
Mat<M::dimension> finite_difference_jacobian(const M& m, const typename M::State& u,
                                             double h = 1e-5) {
    constexpr int n = M::dimension;
    Mat<n> jac;
    for (int j = 0; j < n; ++j) {
        typename M::State up = u, um = u;
        up[j] += h;
        um[j] -= h;
        jac.col(j) = (m.rhs(up) - m.rhs(um)) / (2.0 * h);
    }
    return jac;
}

template <OdeSystem M>
Mat<M::dimension> system_jacobian(const M& m, const typename M::State& u) {
    if constexpr (HasAnalyticJacobian<M>) {
        return m.jacobian(u);
    } else {
        return finite_difference_jacobian(m, u);
    }
}

} // namespace hht
