#pragma once

#include "hht/models/disease.hpp"
#include "hht/parallel.hpp"
#include "hht/rk45.hpp"
#include "hht/schemes.hpp"
#include "hht/system.hpp"
#include "hht/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hht {

// ---------------------------------------------------------------------------
// Fixed points of the disease model via the scalar reduction
// ---------------------------------------------------------------------------

// g(x; S) = -x - sum_{he,le,li} F_i(x) w_i (x-x_i) - F_hi(x)^2 w_hi (x-x_hi) + S.
// Unbounded and strictly decreasing for the default parametrization, so it
// has exactly one root.
inline double fixed_point_residual(double x, double S, const DiseaseParams& p) {
    const double fhe = sigmoid_activation(x, p.delta_he, p.xtilde_he);
    const double fhi = sigmoid_activation(x, p.delta_hi, p.xtilde_hi);
    const double fle = sigmoid_activation(x, p.delta_le, p.xtilde_le);
    const double fli = sigmoid_activation(x, p.delta_li, p.xtilde_li);
    return -x
           - fhe * p.w_he * (x - p.x_he)
           - fle * p.w_le * (x - p.x_le)
           - fli * p.w_li * (x - p.x_li)
           - fhi * fhi * p.w_hi * (x - p.x_hi)
           + S;
}

inline double fixed_point_residual_derivative(double x, double S, const DiseaseParams& p) {
    (void)S;
    const double fhe = sigmoid_activation(x, p.delta_he, p.xtilde_he);
    const double fhi = sigmoid_activation(x, p.delta_hi, p.xtilde_hi);
    const double fle = sigmoid_activation(x, p.delta_le, p.xtilde_le);
    const double fli = sigmoid_activation(x, p.delta_li, p.xtilde_li);
    const double dfhe = p.delta_he * fhe * (1.0 - fhe);
    const double dfhi = p.delta_hi * fhi * (1.0 - fhi);
    const double dfle = p.delta_le * fle * (1.0 - fle);
    const double dfli = p.delta_li * fli * (1.0 - fli);
    return -1.0
           - p.w_he * (dfhe * (x - p.x_he) + fhe)
           - p.w_le * (dfle * (x - p.x_le) + fle)
           - p.w_li * (dfli * (x - p.x_li) + fli)
           - p.w_hi * (2.0 * fhi * dfhi * (x - p.x_hi) + fhi * fhi);
}

struct DiseaseFixedPoint {
    double S = 0.0;
    double x_star = 0.0;
    Vec3 a_star = Vec3::Zero();
    std::array<std::complex<double>, 4> eigenvalues{};
    double max_real_part = 0.0;
    double residual = 0.0;
};

// Newton-Raphson on g with the analytic derivative, bisection-safeguarded on
// the bracket [-200, 600].
inline DiseaseFixedPoint solve_fixed_point(double S, const DiseaseParams& p,
                                           double tol = 1e-12) {
    if (!(tol > 0.0)) throw ConfigError("fixed-point tolerance must be positive");
    double lo = -200.0, hi = 600.0;
    double g_lo = fixed_point_residual(lo, S, p);
    double g_hi = fixed_point_residual(hi, S, p);
    if (g_lo == 0.0) std::swap(lo, hi), std::swap(g_lo, g_hi);
    if (!(g_lo > 0.0 && g_hi < 0.0)) {
        throw NumericsError("fixed-point residual has no sign change on [-200, 600]; "
                            "non-default parameters?");
    }

    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double g = fixed_point_residual(x, S, p);
        if (g > 0.0) lo = x;
        else if (g < 0.0) hi = x;
        if (std::abs(g) <= tol) break;
        const double dg = fixed_point_residual_derivative(x, S, p);
        double x_new = x - g / dg;
        if (!(x_new > lo && x_new < hi)) {
            x_new = 0.5 * (lo + hi); // Newton left the bracket
        }
        if (x_new == x) break;
        x = x_new;
    }

    DiseaseFixedPoint fp;
    fp.S = S;
    fp.x_star = x;
    const DiseaseModel model(p);
    fp.a_star = model.equilibrium_activations(x);
    fp.residual = fixed_point_residual(x, S, p);

    Vec4 u_star;
    u_star[0] = x;
    u_star.tail<3>() = fp.a_star;
    const Eigen::EigenSolver<Mat<4>> es(model.jacobian(u_star));
    double max_re = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        fp.eigenvalues[i] = es.eigenvalues()[i];
        max_re = std::max(max_re, fp.eigenvalues[i].real());
    }
    fp.max_real_part = max_re;
    return fp;
}

// Inclusive arithmetic grid s_min, s_min+step, ..., s_max.
inline std::vector<double> scan_grid(double s_min, double s_max, double step) {
    if (!(step > 0.0)) throw ConfigError("scan step must be positive");
    if (s_max < s_min) throw ConfigError("scan range is empty");
    std::vector<double> grid;
    const long count = std::lround(std::floor((s_max - s_min) / step + 1e-9)) + 1;
    grid.reserve(count);
    for (long k = 0; k < count; ++k) grid.push_back(s_min + static_cast<double>(k) * step);
    return grid;
}

struct EigenvalueSweep {
    std::vector<DiseaseFixedPoint> points;
    // S intervals (previous grid point, next grid point) bracketing a change.
    std::vector<std::pair<double, double>> stability_sign_changes;
    std::vector<std::pair<double, double>> real_to_complex_transitions;
};

inline EigenvalueSweep eigenvalue_sweep(double s_min, double s_max, double step,
                                        const DiseaseParams& p, double tol = 1e-12) {
    EigenvalueSweep sweep;
    const auto grid = scan_grid(s_min, s_max, step);
    sweep.points.reserve(grid.size());
    for (double S : grid) sweep.points.push_back(solve_fixed_point(S, p, tol));

    auto complex_count = [](const DiseaseFixedPoint& fp) {
        int c = 0;
        for (const auto& ev : fp.eigenvalues) {
            if (std::abs(ev.imag()) > 1e-9) ++c;
        }
        return c;
    };
    for (std::size_t i = 1; i < sweep.points.size(); ++i) {
        const auto& a = sweep.points[i - 1];
        const auto& b = sweep.points[i];
        if ((a.max_real_part < 0.0) != (b.max_real_part < 0.0)) {
            sweep.stability_sign_changes.emplace_back(a.S, b.S);
        }
        if (complex_count(a) != complex_count(b)) {
            sweep.real_to_complex_transitions.emplace_back(a.S, b.S);
        }
    }
    return sweep;
}

// ---------------------------------------------------------------------------
// Lyapunov spectrum (tangent propagation + periodic QR reorthonormalization)
// ---------------------------------------------------------------------------

struct LyapunovSettings {
    double horizon = 20000.0;
    double transient = 500.0;
    double renorm_interval = 1.0;
    double dt = 0.01;
    Scheme scheme = Scheme::icn;
    double eps_fp = 1e-7;
    int max_fp_iters = 10;
};

template <int N>
struct LyapunovSpectrum {
    std::array<double, N> exponents{}; // sorted descending
    double horizon = 0.0;
    double transient = 0.0;
    double averaged_trace = 0.0; // time-averaged Jacobian trace along the orbit
};

// Propagates the state with the selected fixed-step scheme and the tangent
// basis with the trapezoidal rule on dM/dt = J(u(t)) M, reorthonormalizing
// with QR every renorm_interval. The initial tangent basis is the identity.
template <class M>
    requires SplitSystem<M> && HasAnalyticJacobian<M>
LyapunovSpectrum<M::dimension> lyapunov_spectrum(const M& m, const typename M::State& u0,
                                                 const LyapunovSettings& ls) {
    constexpr int n = M::dimension;
    if (!(ls.horizon > ls.transient)) throw ConfigError("horizon must exceed transient");
    const FixedStepSettings cfg{ls.dt, 1.0, ls.eps_fp, ls.max_fp_iters, ls.max_fp_iters};

    typename M::State u = u0;
    const long transient_steps = std::lround(ls.transient / ls.dt);
    for (long k = 0; k < transient_steps; ++k) {
        u = step_scheme(m, ls.scheme, u, ls.dt, cfg).state;
        if (!all_finite<n>(u)) throw NumericsError("lyapunov transient diverged");
    }

    const long steps = std::lround((ls.horizon - ls.transient) / ls.dt);
    const long renorm_every = std::max<long>(1, std::lround(ls.renorm_interval / ls.dt));

    Mat<n> tangent = Mat<n>::Identity();
    Mat<n> jac_prev = m.jacobian(u);
    std::array<double, n> log_sums{};
    double trace_integral = 0.0;
    const Mat<n> eye = Mat<n>::Identity();

    auto reorthonormalize = [&]() {
        const Eigen::HouseholderQR<Mat<n>> qr(tangent);
        const Mat<n> r = qr.matrixQR().template triangularView<Eigen::Upper>();
        for (int i = 0; i < n; ++i) {
            const double d = std::abs(r(i, i));
            if (d == 0.0) throw NumericsError("tangent basis became singular");
            log_sums[i] += std::log(d);
        }
        tangent = qr.householderQ();
    };

    for (long k = 1; k <= steps; ++k) {
        u = step_scheme(m, ls.scheme, u, ls.dt, cfg).state;
        if (!all_finite<n>(u)) throw NumericsError("lyapunov propagation diverged");
        const Mat<n> jac_next = m.jacobian(u);
        const Mat<n> lhs = eye - (ls.dt / 2.0) * jac_next;
        const Mat<n> rhs = (eye + (ls.dt / 2.0) * jac_prev) * tangent;
        tangent = lhs.partialPivLu().solve(rhs);
        trace_integral += ls.dt * 0.5 * (jac_prev.trace() + jac_next.trace());
        jac_prev = jac_next;
        if (k % renorm_every == 0) reorthonormalize();
    }
    if (steps % renorm_every != 0) reorthonormalize();

    LyapunovSpectrum<n> out;
    const double span = static_cast<double>(steps) * ls.dt;
    for (int i = 0; i < n; ++i) out.exponents[i] = log_sums[i] / span;
    std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
    out.horizon = ls.horizon;
    out.transient = ls.transient;
    out.averaged_trace = trace_integral / span;
    return out;
}

struct DiseaseLyapunov {
    double S = 0.0;
    LyapunovSpectrum<4> spectrum;
};

inline DiseaseLyapunov disease_lyapunov(double S, const DiseaseParams& base,
                                        const LyapunovSettings& ls = {}) {
    DiseaseParams p = base;
    p.S = S;
    const DiseaseModel model(p);
    return DiseaseLyapunov{S, lyapunov_spectrum(model, Vec4::Zero(), ls)};
}

// ---------------------------------------------------------------------------
// Poincare sections and interspike intervals
// ---------------------------------------------------------------------------

enum class CrossingDirection { up, down, both };

inline CrossingDirection parse_direction(std::string_view name) {
    if (name == "up") return CrossingDirection::up;
    if (name == "down") return CrossingDirection::down;
    if (name == "both") return CrossingDirection::both;
    throw ConfigError("unknown crossing direction (valid: up, down, both)");
}

template <int N>
struct PoincareCrossing {
    double t = 0.0;
    Vec<N> state = Vec<N>::Zero(); // linearly interpolated onto the plane
    int direction = +1;            // +1 upward, -1 downward
};

// Streaming sign-change detector over consecutive trajectory samples with
// linear interpolation of the crossing time and state.
template <int N>
class CrossingDetector {
public:
    CrossingDetector(double offset, CrossingDirection dir) : offset_(offset), dir_(dir) {}

    void feed(double t, const Vec<N>& u) {
        if (has_prev_) {
            const double s0 = prev_u_[0] - offset_;
            const double s1 = u[0] - offset_;
            const bool up = s0 < 0.0 && s1 >= 0.0;
            const bool down = s0 > 0.0 && s1 <= 0.0;
            const bool take = (dir_ == CrossingDirection::up && up) ||
                              (dir_ == CrossingDirection::down && down) ||
                              (dir_ == CrossingDirection::both && (up || down));
            if (take) {
                const double theta = s0 / (s0 - s1);
                PoincareCrossing<N> c;
                c.t = prev_t_ + theta * (t - prev_t_);
                c.state = prev_u_ + theta * (u - prev_u_);
                c.direction = up ? +1 : -1;
                crossings_.push_back(c);
            }
        }
        prev_t_ = t;
        prev_u_ = u;
        has_prev_ = true;
    }

    const std::vector<PoincareCrossing<N>>& crossings() const { return crossings_; }
    std::vector<PoincareCrossing<N>> take() { return std::move(crossings_); }

private:
    double offset_;
    CrossingDirection dir_;
    bool has_prev_ = false;
    double prev_t_ = 0.0;
    Vec<N> prev_u_ = Vec<N>::Zero();
    std::vector<PoincareCrossing<N>> crossings_;
};

template <int N>
std::vector<PoincareCrossing<N>> poincare_crossings(const Trajectory<N>& traj, double offset,
                                                    CrossingDirection dir = CrossingDirection::up) {
    CrossingDetector<N> det(offset, dir);
    for (std::size_t i = 0; i < traj.size(); ++i) det.feed(traj.times[i], traj.states[i]);
    return det.take();
}

/// Consecutive differences of crossing times; empty for fewer than 2 crossings.
template <int N>
std::vector<double> isi_distribution(const std::vector<PoincareCrossing<N>>& crossings) {
    std::vector<double> isis;
    if (crossings.size() < 2) return isis;
    isis.reserve(crossings.size() - 1);
    for (std::size_t i = 1; i < crossings.size(); ++i) {
        isis.push_back(crossings[i].t - crossings[i - 1].t);
    }
    return isis;
}

// ---------------------------------------------------------------------------
// Bifurcation sweep over S
// ---------------------------------------------------------------------------

struct SweepSettings {
    double s_min = 0.0;
    double s_max = 400.0;
    double s_step = 1.0;
    Scheme scheme = Scheme::icn;
    double dt = 0.01;
    double horizon = 10000.0;
    double transient = 500.0;
    double plane_offset = 40.0;
    CrossingDirection direction = CrossingDirection::up;
    double eps_fp = 1e-7;
    int max_fp_iters = 10;
    int threads = 0; // 0: HHT_LAB_THREADS or hardware
};

struct BifurcationEntry {
    double S = 0.0;
    std::vector<PoincareCrossing<4>> crossings; // post-transient only
    std::vector<double> isis;
    bool failed = false;
    std::string error;
};

struct BifurcationDiagram {
    SweepSettings settings;
    std::vector<BifurcationEntry> entries; // ordered by S
};

inline BifurcationEntry sweep_single(double S, const DiseaseParams& base,
                                     const SweepSettings& s) {
    BifurcationEntry entry;
    entry.S = S;
    DiseaseParams p = base;
    p.S = S;
    const DiseaseModel model(p);
    CrossingDetector<4> det(s.plane_offset, s.direction);
    try {
        if (s.scheme == Scheme::rk45_baseline) {
            integrate_rk45_observe(model, Vec4::Zero(), s.horizon, s.eps_fp,
                                   [&](double t, const Vec4& u) { det.feed(t, u); }, s.dt);
        } else {
            const FixedStepSettings cfg{s.dt, s.horizon, s.eps_fp, s.max_fp_iters,
                                        s.max_fp_iters};
            integrate_observe(model, s.scheme, Vec4::Zero(), cfg,
                              [&](double t, const Vec4& u, const StepMeta&) { det.feed(t, u); });
        }
    } catch (const std::exception& e) {
        entry.failed = true;
        entry.error = e.what();
        return entry;
    }
    entry.crossings = det.take();
    std::erase_if(entry.crossings,
                  [&](const PoincareCrossing<4>& c) { return c.t < s.transient; });
    entry.isis.clear();
    if (entry.crossings.size() >= 2) {
        for (std::size_t i = 1; i < entry.crossings.size(); ++i) {
            entry.isis.push_back(entry.crossings[i].t - entry.crossings[i - 1].t);
        }
    }
    return entry;
}

// Per-S work items run in parallel; entries are merged in S order, so the
// diagram is independent of the thread count.
inline BifurcationDiagram bifurcation_sweep(const DiseaseParams& base, const SweepSettings& s) {
    BifurcationDiagram diagram;
    diagram.settings = s;
    const auto grid = scan_grid(s.s_min, s.s_max, s.s_step);
    diagram.entries.resize(grid.size());
    parallel_for_index(grid.size(), resolve_threads(s.threads), [&](std::size_t i) {
        diagram.entries[i] = sweep_single(grid[i], base, s);
    });
    return diagram;
}

// ---------------------------------------------------------------------------
// Branch points and the period-doubling ratio
// ---------------------------------------------------------------------------

/// Single-linkage cluster count of a 1-D sample set: clusters split where the
/// sorted gap exceeds tol.
inline int isi_cluster_count(std::vector<double> values, double tol) {
    if (values.empty()) return 0;
    std::sort(values.begin(), values.end());
    int clusters = 1;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] - values[i - 1] > tol) ++clusters;
    }
    return clusters;
}

struct BranchEvent {
    double S = 0.0; // grid point where the new count is first seen
    int clusters_before = 0;
    int clusters_after = 0;
};

struct BranchReport {
    std::vector<BranchEvent> events; // every cluster-count change
    std::vector<double> split_S;     // count increases: branches separating
    std::vector<double> merge_S;     // count decreases: branches collapsing
    // (b2-b1)/(b3-b2) over the first chain of >= 3 uninterrupted splits
    std::optional<double> feigenbaum_ratio;
};

// Reports every cluster-count change over the scan. A period doubling shows
// up as a count increase (the two offspring of a branch separate at slightly
// different S, so exact count doubling is not observable); a halving as a
// decrease. The cascade ratio comes from the first run of at least three
// splits with no intervening merge.
inline BranchReport detect_branch_points(const BifurcationDiagram& diagram,
                                         double cluster_tol = 0.5) {
    BranchReport report;
    int prev_count = -1;
    for (const auto& entry : diagram.entries) {
        if (entry.failed) continue;
        const int count = isi_cluster_count(entry.isis, cluster_tol);
        if (prev_count >= 0 && count != prev_count) {
            report.events.push_back(BranchEvent{entry.S, prev_count, count});
            if (count > prev_count) {
                report.split_S.push_back(entry.S);
            } else {
                report.merge_S.push_back(entry.S);
            }
        }
        prev_count = count;
    }

    std::vector<double> chain;
    for (const auto& ev : report.events) {
        if (ev.clusters_after > ev.clusters_before) {
            chain.push_back(ev.S);
        } else {
            if (chain.size() >= 3) break;
            chain.clear();
        }
    }
    if (chain.size() >= 3 && chain[2] != chain[1]) {
        report.feigenbaum_ratio = (chain[1] - chain[0]) / (chain[2] - chain[1]);
    }
    return report;
}

} // namespace hht
