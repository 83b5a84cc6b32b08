#include "hht/controllers.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace hht;
using Catch::Approx;

TEST_CASE("relative error") {
    SECTION("identical states give zero") {
        CHECK(relative_error<2>(Vec2(1.0, 2.0), Vec2(1.0, 2.0)) == 0.0);
    }
    SECTION("scalar step from 1 to 2") {
        CHECK(relative_error<1>(Vec1(1.0), Vec1(2.0)) == 0.5);
    }
    SECTION("maximum norm variant") {
        CHECK(relative_error<2>(Vec2(1.0, 2.0), Vec2(1.0, 4.0), Norm::maximum) == 0.5);
    }
    SECTION("zero next state is degenerate") {
        CHECK_THROWS_AS(relative_error<2>(Vec2(1.0, 0.0), Vec2::Zero()), NumericsError);
    }
}

TEST_CASE("pid step controller") {
    const StepClamps clamps{1e-10, 10.0, 5.0};
    PidParams pid; // k_p=0.075, k_i=0.175, k_d=0.01, eps_t=1e-7

    SECTION("steady history at the target keeps the step") {
        ControllerState ctrl;
        ctrl.dt = 0.02;
        ctrl.push_error(pid.eps_t);
        ctrl.push_error(pid.eps_t);
        ctrl.push_error(pid.eps_t);
        CHECK(pid_next_step(ctrl, pid, clamps) == 0.02);
    }
    SECTION("integral-only factor on the first controlled step") {
        ControllerState ctrl;
        ctrl.dt = 0.01;
        ctrl.push_error(pid.eps_t / 2.0);
        // (eps/e)^0.175 = 2^0.175
        CHECK(pid_next_step(ctrl, pid, clamps) ==
              Approx(0.01 * 1.1289644048061312).epsilon(1e-12));
    }
    SECTION("flat history above the target shrinks the step") {
        ControllerState ctrl;
        ctrl.dt = 0.01;
        ctrl.push_error(2.0 * pid.eps_t);
        ctrl.push_error(2.0 * pid.eps_t);
        ctrl.push_error(2.0 * pid.eps_t);
        CHECK(pid_next_step(ctrl, pid, clamps) ==
              Approx(0.01 * 0.8857675191023606).epsilon(1e-12));
    }
    SECTION("zero error history falls back to capped growth") {
        ControllerState ctrl;
        ctrl.dt = 0.01;
        ctrl.push_error(0.0);
        ctrl.push_error(0.0);
        ctrl.push_error(0.0);
        CHECK(pid_next_step(ctrl, pid, clamps) == Approx(0.05).epsilon(1e-14));
    }
    SECTION("profiles are distinct") {
        CHECK(pid_profile("default").k_i == 0.175);
        CHECK(pid_profile("hand-tuned").k_i == 0.075);
        CHECK(pid_profile("hand-tuned").k_p == 0.025);
        CHECK_THROWS_AS(pid_profile("nope"), ConfigError);
    }
}

TEST_CASE("richardson step controllers") {
    const StepClamps clamps{1e-10, 10.0, 5.0};

    SECTION("order-2 algebraic fixed point") {
        const double dt = 0.037;
        const double diff = 1e-7 * (4.0 - 1.0);
        CHECK(richardson_step_order2(dt, 2, diff, 1e-7, clamps) == Approx(dt).epsilon(1e-12));
    }
    SECTION("order-2 worked value") {
        CHECK(richardson_step_order2(0.1, 2, 1.2e-6, 1e-7, clamps) ==
              Approx(0.05).epsilon(1e-12));
    }
    SECTION("order-4 algebraic fixed point and halving") {
        const double dt = 0.2;
        CHECK(richardson_step_order4(dt, 2, 1e-7 * 15.0, 1e-7, clamps) ==
              Approx(dt).epsilon(1e-12));
        CHECK(richardson_step_order4(dt, 2, 16.0 * 15.0 * 1e-7, 1e-7, clamps) ==
              Approx(dt / 2.0).epsilon(1e-12));
    }
    SECTION("vanishing difference proposes the maximum step") {
        CHECK(richardson_step_order2(0.1, 2, 0.0, 1e-7, clamps) == clamps.dt_max);
        CHECK(richardson_step_order4(0.1, 2, 0.0, 1e-7, clamps) == clamps.dt_max);
    }
    SECTION("self-consistency under error rescaling") {
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> dts(1e-3, 0.5);
        std::uniform_real_distribution<double> diffs(1e-9, 1e-3);
        for (int k = 0; k < 200; ++k) {
            const double dt = dts(rng);
            const double diff = diffs(rng);
            const double eps = 1e-7;
            {
                const double star = richardson_step_order2(dt, 2, diff, eps, clamps);
                if (star > clamps.dt_min && star < clamps.dt_max) {
                    const double rescaled = diff * std::pow(star / dt, 2);
                    CHECK(richardson_step_order2(star, 2, rescaled, eps, clamps) ==
                          Approx(star).epsilon(1e-12));
                }
            }
            {
                const double star = richardson_step_order4(dt, 2, diff, eps, clamps);
                if (star > clamps.dt_min && star < clamps.dt_max) {
                    const double rescaled = diff * std::pow(star / dt, 4);
                    CHECK(richardson_step_order4(star, 2, rescaled, eps, clamps) ==
                          Approx(star).epsilon(1e-12));
                }
            }
        }
    }
}
