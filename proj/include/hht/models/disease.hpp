#pragma once

#include "hht/system.hpp"
#include "hht/types.hpp"

#include <cmath>

namespace hht {

/// Logistic activation 1/(1+exp(-delta*(x-xtilde))). Saturates to {0,1} at
/// extreme arguments without overflow.
inline double sigmoid_activation(double x, double delta, double xtilde) {
    return 1.0 / (1.0 + std::exp(-delta * (x - xtilde)));
}

/// d/dx of sigmoid_activation, equals delta*F*(1-F).
inline double sigmoid_activation_derivative(double x, double delta, double xtilde) {
    const double f = sigmoid_activation(x, delta, xtilde);
    return delta * f * (1.0 - f);
}

// Neuropsychiatric disease dynamics model, reduced to four dimensions.
// The fast excitatory activation responds instantaneously (its time constant
// is zero), so it is always recomputed as F_he(x) instead of being carried in
// the state. State layout: (x, a_hi, a_le, a_li).
struct DiseaseParams {
    double tau_x = 10.0;
    double tau_hi = 2.0;
    double tau_le = 10.0;
    double tau_li = 50.0;

    double w_he = 15.0;
    double w_hi = 20.0;
    double w_le = 3.0;
    double w_li = 18.0;

    // Reversal levels grouped by excitatory/inhibitory role.
    double x_he = 110.0;
    double x_hi = -30.0;
    double x_le = 110.0;
    double x_li = -30.0;

    double delta_he = 0.25;
    double delta_hi = 0.25;
    double delta_le = 0.25;
    double delta_li = 0.25;

    double xtilde_he = 35.0;
    double xtilde_hi = 35.0;
    double xtilde_le = 20.0;
    double xtilde_li = 20.0;

    double S = 0.0;
};

class DiseaseModel {
public:
    static constexpr int dimension = 4;
    static constexpr bool linear_activation = true;
    using State = Vec4;
    using Activations = Vec3;

    explicit DiseaseModel(const DiseaseParams& p = {}) : p_(p) {}

    const DiseaseParams& params() const { return p_; }

    double f_he(double x) const { return sigmoid_activation(x, p_.delta_he, p_.xtilde_he); }
    double f_hi(double x) const { return sigmoid_activation(x, p_.delta_hi, p_.xtilde_hi); }
    double f_le(double x) const { return sigmoid_activation(x, p_.delta_le, p_.xtilde_le); }
    double f_li(double x) const { return sigmoid_activation(x, p_.delta_li, p_.xtilde_li); }

    // f1: observable reaction with a_he substituted by F_he(x); source excluded.
    double observable_rate(const State& u) const {
        const double x = u[0];
        const double a_hi = u[1], a_le = u[2], a_li = u[3];
        const double coupling = f_he(x) * p_.w_he * (x - p_.x_he)
                              + a_le * p_.w_le * (x - p_.x_le)
                              + a_li * p_.w_li * (x - p_.x_li)
                              + a_hi * a_hi * p_.w_hi * (x - p_.x_hi);
        return (-x - coupling) / p_.tau_x;
    }

    double source_rate() const { return p_.S / p_.tau_x; }

    // f2: relaxation of each retained activation toward its sigmoid.
    Activations activation_rates(double x, const Activations& a) const {
        Activations r;
        r[0] = (f_hi(x) - a[0]) / p_.tau_hi;
        r[1] = (f_le(x) - a[1]) / p_.tau_le;
        r[2] = (f_li(x) - a[2]) / p_.tau_li;
        return r;
    }

    // Exact solution of a = a_base + dt_eff*(F_i(x_eval) - a)/tau_i, a convex
    // combination of a_base and F_i(x_eval) for dt_eff >= 0. Written in lerp
    // form so dt_eff = 0 is the exact identity and [0,1] is preserved.
    Activations implicit_activation_update(const Activations& a_base, double x_eval,
                                           double dt_eff) const {
        Activations a;
        a[0] = a_base[0] + dt_eff / (p_.tau_hi + dt_eff) * (f_hi(x_eval) - a_base[0]);
        a[1] = a_base[1] + dt_eff / (p_.tau_le + dt_eff) * (f_le(x_eval) - a_base[1]);
        a[2] = a_base[2] + dt_eff / (p_.tau_li + dt_eff) * (f_li(x_eval) - a_base[2]);
        return a;
    }

    State rhs(const State& u) const {
        State d;
        d[0] = observable_rate(u) + source_rate();
        d.tail<3>() = activation_rates(u[0], u.tail<3>());
        return d;
    }

    // Splitting rhs = F1 + F2 + Svec with F1 zero on the activation block and
    // F2 zero on the observable.
    struct Split {
        State f1 = State::Zero();
        State f2 = State::Zero();
        State source = State::Zero();
    };

    Split split(const State& u) const {
        Split s;
        s.f1[0] = observable_rate(u);
        s.f2.tail<3>() = activation_rates(u[0], u.tail<3>());
        s.source[0] = source_rate();
        return s;
    }

    // Analytic Jacobian of the reduced system. Rows 2..4 use F_i(x), not the
    // state activation, in their first column.
    Mat<4> jacobian(const State& u) const {
        const double x = u[0];
        const double a_hi = u[1], a_le = u[2], a_li = u[3];
        const double fhe = f_he(x);
        Mat<4> jac = Mat<4>::Zero();
        jac(0, 0) = -(1.0
                      + p_.delta_he * fhe * (1.0 - fhe) * p_.w_he * (x - p_.x_he)
                      + fhe * p_.w_he
                      + a_hi * a_hi * p_.w_hi
                      + a_le * p_.w_le
                      + a_li * p_.w_li) / p_.tau_x;
        jac(0, 1) = -2.0 * a_hi * p_.w_hi * (x - p_.x_hi) / p_.tau_x;
        jac(0, 2) = -p_.w_le * (x - p_.x_le) / p_.tau_x;
        jac(0, 3) = -p_.w_li * (x - p_.x_li) / p_.tau_x;

        jac(1, 0) = sigmoid_activation_derivative(x, p_.delta_hi, p_.xtilde_hi) / p_.tau_hi;
        jac(2, 0) = sigmoid_activation_derivative(x, p_.delta_le, p_.xtilde_le) / p_.tau_le;
        jac(3, 0) = sigmoid_activation_derivative(x, p_.delta_li, p_.xtilde_li) / p_.tau_li;
        jac(1, 1) = -1.0 / p_.tau_hi;
        jac(2, 2) = -1.0 / p_.tau_le;
        jac(3, 3) = -1.0 / p_.tau_li;
        return jac;
    }

    Activations activation_time_constants() const {
        return Activations(p_.tau_hi, p_.tau_le, p_.tau_li);
    }

    // Activations at equilibrium with the given observable level.
    Activations equilibrium_activations(double x) const {
        return Activations(f_hi(x), f_le(x), f_li(x));
    }

private:
    DiseaseParams p_;
};

} // namespace hht
