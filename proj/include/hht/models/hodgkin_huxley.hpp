#pragma once

#include "hht/system.hpp"
#include "hht/types.hpp"

#include <cmath>

namespace hht {

// Squid-axon parameters in the resting-potential-at-zero convention.
struct HhParams {
    double C = 1.0;
    double gbar_K = 36.0;
    double gbar_Na = 120.0;
    double g_L = 0.3;
    double E_K = -12.0;
    double E_Na = 115.0;
    double E_L = 10.613;
    double I = 0.0;
};

// Canonical Hodgkin-Huxley membrane ODE, state (V, n, m, h). The gating
// equations y' = (y_inf(V) - y)/tau_y(V) are linear in y for fixed V, so the
// implicit activation solve is exact with voltage-dependent coefficients.
class HodgkinHuxleyModel {
public:
    static constexpr int dimension = 4;
    static constexpr bool linear_activation = true;
    using State = Vec4;
    using Activations = Vec3;

    explicit HodgkinHuxleyModel(const HhParams& p = {}) : p_(p) {}

    const HhParams& params() const { return p_; }

    // Transition rates from the 1952 fit. The ratios alpha_n and alpha_m have
    // removable singularities at V=10 and V=25; below 1e-7 in the scaled
    // denominator argument the analytic limit is substituted.
    static double alpha_n(double v) {
        const double w = (10.0 - v) / 10.0;
        if (std::abs(w) < 1e-7) return 0.1;
        return 0.1 * w / (std::exp(w) - 1.0);
    }
    static double beta_n(double v) { return 0.125 * std::exp(-v / 80.0); }
    static double alpha_m(double v) {
        const double w = (25.0 - v) / 10.0;
        if (std::abs(w) < 1e-7) return 1.0;
        return w / (std::exp(w) - 1.0);
    }
    static double beta_m(double v) { return 4.0 * std::exp(-v / 18.0); }
    static double alpha_h(double v) { return 0.07 * std::exp(-v / 20.0); }
    static double beta_h(double v) { return 1.0 / (std::exp((30.0 - v) / 10.0) + 1.0); }

    static double n_inf(double v) { return alpha_n(v) / (alpha_n(v) + beta_n(v)); }
    static double m_inf(double v) { return alpha_m(v) / (alpha_m(v) + beta_m(v)); }
    static double h_inf(double v) { return alpha_h(v) / (alpha_h(v) + beta_h(v)); }
    static double tau_n(double v) { return 1.0 / (alpha_n(v) + beta_n(v)); }
    static double tau_m(double v) { return 1.0 / (alpha_m(v) + beta_m(v)); }
    static double tau_h(double v) { return 1.0 / (alpha_h(v) + beta_h(v)); }

    double observable_rate(const State& u) const {
        validate_gating(u.tail<3>());
        const double v = u[0], n = u[1], m = u[2], h = u[3];
        const double i_k = p_.gbar_K * n * n * n * n * (v - p_.E_K);
        const double i_na = p_.gbar_Na * m * m * m * h * (v - p_.E_Na);
        const double i_l = p_.g_L * (v - p_.E_L);
        return -(i_k + i_na + i_l) / p_.C;
    }

    double source_rate() const { return p_.I / p_.C; }

    Activations activation_rates(double v, const Activations& y) const {
        validate_gating(y);
        Activations r;
        r[0] = (n_inf(v) - y[0]) / tau_n(v);
        r[1] = (m_inf(v) - y[1]) / tau_m(v);
        r[2] = (h_inf(v) - y[2]) / tau_h(v);
        return r;
    }

    Activations implicit_activation_update(const Activations& y_base, double v_eval,
                                           double dt_eff) const {
        Activations y;
        const double tn = tau_n(v_eval), tm = tau_m(v_eval), th = tau_h(v_eval);
        y[0] = y_base[0] + dt_eff / (tn + dt_eff) * (n_inf(v_eval) - y_base[0]);
        y[1] = y_base[1] + dt_eff / (tm + dt_eff) * (m_inf(v_eval) - y_base[1]);
        y[2] = y_base[2] + dt_eff / (th + dt_eff) * (h_inf(v_eval) - y_base[2]);
        return y;
    }

    State rhs(const State& u) const {
        State d;
        d[0] = observable_rate(u) + source_rate();
        d.tail<3>() = activation_rates(u[0], u.tail<3>());
        return d;
    }

    Activations equilibrium_activations(double v) const {
        return Activations(n_inf(v), m_inf(v), h_inf(v));
    }

private:
    static void validate_gating(const Activations& y) {
        for (int i = 0; i < 3; ++i) {
            if (!(y[i] >= -0.1 && y[i] <= 1.1)) {
                throw NumericsError("gating variable outside [-0.1, 1.1]: corrupted state");
            }
        }
    }

    HhParams p_;
};

} // namespace hht
