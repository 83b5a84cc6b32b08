#pragma once

#include "hht/system.hpp"
#include "hht/types.hpp"

namespace hht {

struct VdpParams {
    double mu = 1.0;
};

// Van-der-Pol oscillator, state (x1, x2). The position plays the observable
// role and the velocity the activation role: x2' = mu*(1-x1^2)*x2 - x1 is
// affine in x2, so the implicit activation solve is exact.
class VdpModel {
public:
    static constexpr int dimension = 2;
    static constexpr bool linear_activation = true;
    using State = Vec2;
    using Activations = Vec1;

    explicit VdpModel(const VdpParams& p = {}) : p_(p) {}

    const VdpParams& params() const { return p_; }

    double observable_rate(const State& u) const { return u[1]; }
    double source_rate() const { return 0.0; }

    Activations activation_rates(double x, const Activations& a) const {
        Activations r;
        r[0] = p_.mu * (1.0 - x * x) * a[0] - x;
        return r;
    }

    Activations implicit_activation_update(const Activations& a_base, double x_eval,
                                           double dt_eff) const {
        const double c1 = p_.mu * (1.0 - x_eval * x_eval);
        Activations a;
        a[0] = a_base[0] + dt_eff * (c1 * a_base[0] - x_eval) / (1.0 - dt_eff * c1);
        return a;
    }

    State rhs(const State& u) const {
        State d;
        d[0] = u[1];
        d[1] = p_.mu * (1.0 - u[0] * u[0]) * u[1] - u[0];
        return d;
    }

    Mat<2> jacobian(const State& u) const {
        Mat<2> jac;
        jac(0, 0) = 0.0;
        jac(0, 1) = 1.0;
        jac(1, 0) = -2.0 * p_.mu * u[0] * u[1] - 1.0;
        jac(1, 1) = p_.mu * (1.0 - u[0] * u[0]);
        return jac;
    }

private:
    VdpParams p_;
};

/// Harmonic-oscillator energy (x1^2 + x2^2)/2; conserved by the exact flow
/// when mu = 0.
inline double vdp_energy(const Vec2& u) {
    return 0.5 * (u[0] * u[0] + u[1] * u[1]);
}

} // namespace hht
