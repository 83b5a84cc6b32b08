#pragma once

#include "hht/types.hpp"

#include <cmath>
#include <type_traits>

namespace hht {

template <class V>
struct FixedPointIterate {
    V value;
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline double iterate_norm(double v) { return std::abs(v); }
inline bool iterate_finite(double v) { return std::isfinite(v); }

template <class Derived>
double iterate_norm(const Eigen::MatrixBase<Derived>& v) { return v.norm(); }
template <class Derived>
bool iterate_finite(const Eigen::MatrixBase<Derived>& v) { return v.allFinite(); }

} // namespace detail

// Picard iteration u_i = map(u_{i-1}) from u_0, stopping when the successive
// difference drops to eps (Euclidean norm) or after max_iter applications.
template <class Map, class V>
FixedPointIterate<V> fixed_point_iterate(Map&& map, const V& u0, double eps, int max_iter) {
    FixedPointIterate<V> r{u0, 0, false};
    V prev = u0;
    for (int i = 1; i <= max_iter; ++i) {
        V next = map(prev);
        if (!detail::iterate_finite(next)) {
            throw NumericsError("fixed-point iteration diverged to a non-finite iterate");
        }
        r.iterations = i;
        const double diff = detail::iterate_norm(V(next - prev));
        prev = next;
        if (diff <= eps) {
            r.converged = true;
            break;
        }
    }
    r.value = prev;
    return r;
}

} // namespace hht
