#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "platoon/dynamics.hpp"
#include "platoon/rng.hpp"

#include <cmath>

using namespace platoon;

namespace {
const ActuationLimits kCity{-7.848, 4.905, 27.78};
}

TEST_CASE("saturate clamps to the actuator limits") {
    CHECK(saturate(0.0, kCity) == 0.0);
    CHECK(saturate(4.905, kCity) == 4.905);
    CHECK(saturate(-7.848, kCity) == -7.848);
    CHECK(saturate(100.0, kCity) == 4.905);
    CHECK(saturate(-100.0, kCity) == -7.848);
    CHECK(saturate(1.25, kCity) == 1.25);
}

TEST_CASE("step applies semi-implicit Euler with velocity clamping") {
    // One full-braking step from cruise: v' = 25 - 7.848*0.05 = 24.6076,
    // p' = 0 + 24.6076*0.05 = 1.23038. Exact in double arithmetic.
    const VehicleState next = step({0.0, 25.0}, -7.848, 0.05, kCity);
    CHECK(next.v == doctest::Approx(24.6076).epsilon(1e-14));
    CHECK(next.p == doctest::Approx(1.23038).epsilon(1e-14));

    SUBCASE("velocity never goes negative") {
        const VehicleState stopped = step({10.0, 0.1}, -7.848, 0.05, kCity);
        CHECK(stopped.v == 0.0);
        CHECK(stopped.p == 10.0);  // p' = p + v'*dt with v' = 0
    }
    SUBCASE("velocity never exceeds v_max") {
        const VehicleState capped = step({0.0, 27.7}, 4.905, 0.05, kCity);
        CHECK(capped.v == 27.78);
        CHECK(capped.p == doctest::Approx(27.78 * 0.05).epsilon(1e-14));
    }
    SUBCASE("step applies the command as given; saturation is the caller's job") {
        const VehicleState a = step({0.0, 20.0}, -100.0, 0.05, kCity);
        CHECK(a.v == 15.0);
        const VehicleState b = step({0.0, 20.0}, saturate(-100.0, kCity), 0.05, kCity);
        CHECK(b.v == doctest::Approx(19.6076).epsilon(1e-14));
    }
}

TEST_CASE("step rejects non-finite state and input") {
    CHECK_THROWS_AS(step({0.0, std::nan("")}, 0.0, 0.05, kCity), SimulationError);
    CHECK_THROWS_AS(step({std::nan(""), 1.0}, 0.0, 0.05, kCity), SimulationError);
    CHECK_THROWS_AS(step({0.0, 1.0}, std::nan(""), 0.05, kCity), SimulationError);
    CHECK_THROWS_AS(step({0.0, 1.0}, INFINITY, 0.05, kCity), SimulationError);
}

TEST_CASE("relative_state sign conventions") {
    // Ego exactly at spacing d behind the predecessor: p_tilde = 0.
    const RelativeState at_spacing = relative_state({10.0, 25.0}, {4.0, 25.0}, 6.0);
    CHECK(at_spacing.p_tilde == 0.0);
    CHECK(at_spacing.v_tilde == 0.0);

    // Ego touching the predecessor: p_tilde = d.
    const RelativeState touching = relative_state({10.0, 25.0}, {10.0, 24.0}, 6.0);
    CHECK(touching.p_tilde == 6.0);
    CHECK(touching.v_tilde == -1.0);

    // Closing in from too far back: negative p_tilde, positive v_tilde.
    const RelativeState far = relative_state({10.0, 20.0}, {-2.0, 23.0}, 6.0);
    CHECK(far.p_tilde == -6.0);
    CHECK(far.v_tilde == 3.0);
}

TEST_CASE("property: velocity stays in [0, v_max] under arbitrary commands") {
    Rng rng(42);
    VehicleState state{0.0, 10.0};
    for (int i = 0; i < 20000; ++i) {
        const double u = rng.uniform(-50.0, 50.0);
        state = step(state, u, 0.05, kCity);
        REQUIRE(state.v >= 0.0);
        REQUIRE(state.v <= kCity.v_max);
        REQUIRE(std::isfinite(state.p));
    }
}

TEST_CASE("property: position increments telescope exactly") {
    Rng rng(7);
    VehicleState state{3.25, 12.0};
    double reconstructed = state.p;
    for (int i = 0; i < 5000; ++i) {
        const VehicleState next = step(state, rng.uniform(-8.0, 5.0), 0.05, kCity);
        reconstructed += next.v * 0.05;
        REQUIRE(next.p == doctest::Approx(reconstructed).epsilon(1e-12));
        state = next;
    }
}
