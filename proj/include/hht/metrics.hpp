#pragma once

#include "hht/schemes.hpp"
#include "hht/system.hpp"
#include "hht/types.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace hht {

/// sqrt(dt * ||u||^2): L2 contribution of one step interval, state taken at
/// its left endpoint.
template <int N>
double local_l2_state_norm(const Vec<N>& u, double dt) {
    if (!(dt > 0.0)) throw ConfigError("local norm requires dt > 0");
    return std::sqrt(dt) * u.norm();
}

/// sqrt(dt * ||(u_next - u_n)/dt||^2): L2 contribution of the forward
/// difference over one step.
template <int N>
double local_l2_derivative_norm(const Vec<N>& u_n, const Vec<N>& u_next, double dt) {
    if (!(dt > 0.0)) throw ConfigError("local norm requires dt > 0");
    return (u_next - u_n).norm() / std::sqrt(dt);
}

struct NormReport {
    double global_state_norm = 0.0;
    double global_derivative_norm = 0.0;
    std::vector<double> local_state_norms;
    std::vector<double> local_derivative_norms;
};

// Streaming accumulator over consecutive accepted points. Global norms are
// the square roots of the summed squared local norms; the mean/variance of
// the local state-norm series is tracked with Welford's recurrence so
// arbitrarily long runs need no storage.
template <int N>
class NormAccumulator {
public:
    void feed(double t, const Vec<N>& u) {
        if (has_prev_) {
            const double dt = t - prev_t_;
            if (!(dt > 0.0)) throw NumericsError("non-increasing trajectory times");
            const double ls = local_l2_state_norm<N>(prev_u_, dt);
            const double ld = local_l2_derivative_norm<N>(prev_u_, u, dt);
            state_sq_ += ls * ls;
            deriv_sq_ += ld * ld;
            ++count_;
            const double delta = ls - mean_;
            mean_ += delta / static_cast<double>(count_);
            m2_ += delta * (ls - mean_);
            dt_sum_ += dt;
        }
        prev_t_ = t;
        prev_u_ = u;
        has_prev_ = true;
    }

    double global_state_norm() const { return std::sqrt(state_sq_); }
    double global_derivative_norm() const { return std::sqrt(deriv_sq_); }
    std::int64_t intervals() const { return count_; }
    double mean_local_state_norm() const { return mean_; }
    double variance_local_state_norm() const {
        return count_ > 0 ? m2_ / static_cast<double>(count_) : 0.0;
    }
    double mean_dt() const { return count_ > 0 ? dt_sum_ / static_cast<double>(count_) : 0.0; }

private:
    bool has_prev_ = false;
    double prev_t_ = 0.0;
    Vec<N> prev_u_ = Vec<N>::Zero();
    double state_sq_ = 0.0;
    double deriv_sq_ = 0.0;
    std::int64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double dt_sum_ = 0.0;
};

template <int N, class Traj>
NormReport global_l2_norms_of(const Traj& traj) {
    if (traj.size() < 2) throw ConfigError("norms require a trajectory with >= 2 points");
    NormReport report;
    report.local_state_norms.reserve(traj.size() - 1);
    report.local_derivative_norms.reserve(traj.size() - 1);
    double state_sq = 0.0, deriv_sq = 0.0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        const double dt = traj.times[i] - traj.times[i - 1];
        const double ls = local_l2_state_norm<N>(traj.states[i - 1], dt);
        const double ld = local_l2_derivative_norm<N>(traj.states[i - 1], traj.states[i], dt);
        report.local_state_norms.push_back(ls);
        report.local_derivative_norms.push_back(ld);
        state_sq += ls * ls;
        deriv_sq += ld * ld;
    }
    report.global_state_norm = std::sqrt(state_sq);
    report.global_derivative_norm = std::sqrt(deriv_sq);
    return report;
}

template <int N>
NormReport global_l2_norms(const Trajectory<N>& traj) {
    return global_l2_norms_of<N>(traj);
}

template <int N>
NormReport global_l2_norms(const AdaptiveTrajectory<N>& traj) {
    return global_l2_norms_of<N>(traj);
}

/// Arithmetic mean and population variance of a local-norm series.
inline std::pair<double, double> local_norm_statistics(const std::vector<double>& series) {
    if (series.empty()) throw ConfigError("statistics require a nonempty series");
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(series.size());
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    var /= static_cast<double>(series.size());
    return {mean, var};
}

template <int N>
std::pair<double, double> local_norm_statistics(const Trajectory<N>& traj) {
    return local_norm_statistics(global_l2_norms(traj).local_state_norms);
}

// ---------------------------------------------------------------------------
// Convergence study by repeated step halving
// ---------------------------------------------------------------------------

struct ConvergenceLevel {
    int level = 0;
    double dt = 0.0;
    double integral_error = std::nan(""); // vs the previous (coarser) level
    std::int64_t runtime_ns = 0;
};

struct ConvergenceReport {
    std::vector<ConvergenceLevel> levels;
    double slope = std::nan(""); // least-squares slope of log2(error) per halving
    bool aborted = false;
    std::string abort_reason;
};

namespace detail {

// Trapezoidal integral over the coarse grid of the pointwise Euclidean
// distance. Grids nest exactly (times are n*dt), so the fine trajectory is
// subsampled, never interpolated.
template <int N>
double nested_grid_integral_error(const Trajectory<N>& coarse, const Trajectory<N>& fine) {
    const std::size_t usable =
        std::min(coarse.size(), fine.size() > 0 ? (fine.size() - 1) / 2 + 1 : 0);
    double integral = 0.0;
    for (std::size_t k = 0; k + 1 < usable; ++k) {
        const double d0 = (coarse.states[k] - fine.states[2 * k]).norm();
        const double d1 = (coarse.states[k + 1] - fine.states[2 * k + 2]).norm();
        const double h = coarse.times[k + 1] - coarse.times[k];
        integral += 0.5 * h * (d0 + d1);
    }
    return integral;
}

inline double fitted_slope(const std::vector<double>& log2_errors) {
    const std::size_t n = log2_errors.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += log2_errors[i];
        sxx += x * x;
        sxy += x * log2_errors[i];
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

} // namespace detail

// Runs the scheme at dt0, dt0/2, ..., dt0/2^(levels-1) from u0 and reports
// the integral error between consecutive levels plus the fitted order.
template <SplitSystem M>
ConvergenceReport convergence_study(const M& m, Scheme scheme, const typename M::State& u0,
                                    double dt0, int levels, double horizon, double eps_fp,
                                    int max_iters) {
    if (levels < 3) throw ConfigError("convergence study needs at least 3 levels");
    if (!(dt0 > 0.0 && horizon > 0.0)) throw ConfigError("dt0 and horizon must be positive");

    ConvergenceReport report;
    Trajectory<M::dimension> prev;
    for (int level = 0; level < levels; ++level) {
        const double dt = dt0 * std::pow(2.0, -level);
        const FixedStepSettings cfg{dt, horizon, eps_fp, max_iters, max_iters};
        ConvergenceLevel row;
        row.level = level;
        row.dt = dt;
        const auto start = std::chrono::steady_clock::now();
        Trajectory<M::dimension> cur;
        try {
            cur = integrate(m, scheme, u0, cfg);
        } catch (const NumericsError& e) {
            report.aborted = true;
            report.abort_reason = e.what();
            report.levels.push_back(row);
            return report;
        }
        row.runtime_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        if (level > 0) {
            row.integral_error = detail::nested_grid_integral_error(prev, cur);
        }
        report.levels.push_back(row);
        prev = std::move(cur);
    }

    std::vector<double> log2_errors;
    for (const auto& row : report.levels) {
        if (std::isfinite(row.integral_error) && row.integral_error > 0.0) {
            log2_errors.push_back(std::log2(row.integral_error));
        }
    }
    if (log2_errors.size() >= 2) {
        report.slope = -detail::fitted_slope(log2_errors);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Wall-clock benchmarking
// ---------------------------------------------------------------------------

struct BenchResult {
    double min_s = 0.0;
    double mean_s = 0.0;
    double max_s = 0.0;
    int repetitions = 0;
};

/// Runs the job repetitions times after one discarded warm-up execution.
template <class Job>
BenchResult runtime_benchmark(Job&& job, int repetitions) {
    if (repetitions < 3) throw ConfigError("benchmark needs >= 3 repetitions");
    job(); // warm-up
    BenchResult r;
    r.repetitions = repetitions;
    r.min_s = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (int i = 0; i < repetitions; ++i) {
        const auto start = std::chrono::steady_clock::now();
        job();
        const double secs = std::chrono::duration<double>(
                                std::chrono::steady_clock::now() - start)
                                .count();
        r.min_s = std::min(r.min_s, secs);
        r.max_s = std::max(r.max_s, secs);
        total += secs;
    }
    r.mean_s = total / repetitions;
    return r;
}

} // namespace hht
