#pragma once

#include "hht/system.hpp"
#include "hht/types.hpp"

namespace hht {

struct FhnParams {
    double a = -0.1;
    double b = 0.01;
    double c = 0.02;
    double I = 0.0;
};

// FitzHugh-Nagumo model, state (V, w). The recovery equation w' = b*V - c*w
// is affine in w.
class FhnModel {
public:
    static constexpr int dimension = 2;
    static constexpr bool linear_activation = true;
    using State = Vec2;
    using Activations = Vec1;

    explicit FhnModel(const FhnParams& p = {}) : p_(p) {}

    const FhnParams& params() const { return p_; }

    double observable_rate(const State& u) const {
        const double v = u[0];
        return v * (p_.a - v) * (v - 1.0) - u[1];
    }

    double source_rate() const { return p_.I; }

    Activations activation_rates(double x, const Activations& a) const {
        Activations r;
        r[0] = p_.b * x - p_.c * a[0];
        return r;
    }

    Activations implicit_activation_update(const Activations& a_base, double x_eval,
                                           double dt_eff) const {
        Activations a;
        a[0] = a_base[0] + dt_eff * (p_.b * x_eval - p_.c * a_base[0]) / (1.0 + dt_eff * p_.c);
        return a;
    }

    State rhs(const State& u) const {
        State d;
        d[0] = observable_rate(u) + p_.I;
        d[1] = p_.b * u[0] - p_.c * u[1];
        return d;
    }

    Mat<2> jacobian(const State& u) const {
        const double v = u[0];
        Mat<2> jac;
        jac(0, 0) = -3.0 * v * v + 2.0 * (p_.a + 1.0) * v - p_.a;
        jac(0, 1) = -1.0;
        jac(1, 0) = p_.b;
        jac(1, 1) = -p_.c;
        return jac;
    }

private:
    FhnParams p_;
};

} // namespace hht
