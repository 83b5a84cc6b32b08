#include "hht/models/vdp.hpp"
#include "hht/rk45.hpp"
#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace hht;
using namespace hht::testing;
using Catch::Approx;

TEST_CASE("rk45 baseline") {
    SECTION("exponential decay to analytic accuracy") {
        const ScalarDecay decay{-1.0, 0.0};
        const auto traj = integrate_rk45(decay, Vec1(1.0), 1.0, 1e-10);
        CHECK(traj.back_time() == 1.0);
        CHECK(traj.back_state()[0] == Approx(0.36787944117144233).margin(1e-9));
    }
    SECTION("harmonic energy drift stays below 1e-8") {
        const VdpModel osc{VdpParams{0.0}};
        double max_drift = 0.0;
        integrate_rk45_observe(osc, Vec2(1.0, 0.0), 100.0, 1e-12,
                               [&](double, const Vec2& u) {
                                   max_drift = std::max(max_drift,
                                                        std::abs(vdp_energy(u) - 0.5) / 0.5);
                               });
        CHECK(max_drift < 1e-8);
    }
    SECTION("zero rhs is the exact identity for any tolerance") {
        const ZeroRhs z{};
        for (double tol : {1e-3, 1e-8, 1e-13}) {
            const auto traj = integrate_rk45(z, Vec2(4.0, -2.0), 10.0, tol);
            CHECK(traj.back_time() == 10.0);
            for (const auto& u : traj.states) {
                CHECK(u[0] == 4.0);
                CHECK(u[1] == -2.0);
            }
        }
    }
    SECTION("finite-time blowup raises a numerical failure") {
        const Blowup b{};
        CHECK_THROWS_AS(integrate_rk45(b, Vec1(1.0), 2.0, 1e-10), NumericsError);
    }
    SECTION("sampling at prescribed times hits them exactly") {
        const ScalarDecay decay{-1.0, 0.0};
        const std::vector<double> times{0.0, 0.25, 1.0, 2.5};
        const auto states = rk45_states_at(decay, Vec1(1.0), times, 1e-11);
        REQUIRE(states.size() == times.size());
        for (std::size_t i = 0; i < times.size(); ++i) {
            CHECK(states[i][0] == Approx(std::exp(-times[i])).margin(1e-9));
        }
    }
}
