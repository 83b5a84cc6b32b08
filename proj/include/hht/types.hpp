#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hht {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

using Vec1 = Vec<1>;
using Vec2 = Vec<2>;
using Vec3 = Vec<3>;
using Vec4 = Vec<4>;

template <int N>
using Mat = Eigen::Matrix<double, N, N>;

enum class Norm { absolute, maximum };

template <int N>
inline double norm_of(const Vec<N>& u, Norm kind) {
    return kind == Norm::absolute ? u.norm() : u.template lpNorm<Eigen::Infinity>();
}

template <int N>
inline bool all_finite(const Vec<N>& u) {
    return u.allFinite();
}

/// Configuration or input errors (bad keys, invalid ranges). CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failures (divergence, non-finite states, step underflow). CLI exit code 2.
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what, double time = std::nan(""))
        : std::runtime_error(what), time_(time) {}
    double time() const { return time_; }

private:
    double time_;
};

/// Per-step record of the fixed-point solve.
struct StepMeta {
    int iterations = 0;
    bool converged = true;
    double dt = 0.0;
};

struct AdaptiveStepMeta : StepMeta {
    double dt_star = 0.0;
    bool accepted = true;
    int rejections = 0;
};

template <int N>
struct Trajectory {
    std::vector<double> times;       // strictly increasing, starts at 0
    std::vector<Vec<N>> states;
    std::vector<StepMeta> step_meta; // one entry per point; entry 0 is a sentinel

    std::size_t size() const { return times.size(); }
    const Vec<N>& back_state() const { return states.back(); }
    double back_time() const { return times.back(); }

    void append(double t, const Vec<N>& u, const StepMeta& meta) {
        times.push_back(t);
        states.push_back(u);
        step_meta.push_back(meta);
    }
};

template <int N>
struct AdaptiveTrajectory {
    std::vector<double> times;
    std::vector<Vec<N>> states;
    std::vector<AdaptiveStepMeta> step_meta;

    std::size_t size() const { return times.size(); }
    const Vec<N>& back_state() const { return states.back(); }
    double back_time() const { return times.back(); }

    void append(double t, const Vec<N>& u, const AdaptiveStepMeta& meta) {
        times.push_back(t);
        states.push_back(u);
        step_meta.push_back(meta);
    }
};

} // namespace hht
