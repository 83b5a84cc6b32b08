#include "hht/fixed_point.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace hht;
using Catch::Approx;

TEST_CASE("fixed point iteration") {
    SECTION("contraction to zero") {
        const auto r = fixed_point_iterate([](double u) { return u / 2.0; }, 1.0, 1e-8, 100);
        CHECK(r.converged);
        CHECK(std::abs(r.value) < 1e-7);
    }
    SECTION("non-contraction stops at the iteration cap") {
        const auto r = fixed_point_iterate([](double u) { return u + 1.0; }, 0.0, 1e-8, 7);
        CHECK_FALSE(r.converged);
        CHECK(r.iterations == 7);
        CHECK(r.value == 7.0);
    }
    SECTION("cosine map reaches the Dottie point") {
        const auto r =
            fixed_point_iterate([](double u) { return std::cos(u); }, 1.0, 1e-12, 500);
        CHECK(r.converged);
        CHECK(r.value == Approx(0.7390851332151607).margin(1e-10));
    }
    SECTION("divergence to non-finite raises") {
        CHECK_THROWS_AS(
            fixed_point_iterate([](double u) { return u * 1e200; }, 1.0, 1e-8, 10),
            NumericsError);
    }
    SECTION("vector-valued maps") {
        const Vec2 u0(1.0, -2.0);
        const auto r = fixed_point_iterate(
            [](const Vec2& u) { return Vec2(0.5 * u[0], 0.25 * u[1]); }, u0, 1e-12, 200);
        CHECK(r.converged);
        CHECK(r.value.norm() < 1e-11);
    }
}
