#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "platoon/controllers.hpp"
#include "platoon/rng.hpp"

#include <cmath>

using namespace platoon;

namespace {
const ActuationLimits kCity{-7.848, 4.905, 27.78};
const PlatoonParams kParams{6.0, 25.0, 4};
const ControllerGains kGains{2.616, 0.12, 9.26, 1.0};
}

TEST_CASE("acc_control is zero at the platoon equilibrium") {
    CHECK(acc_control(RelativeState{0.0, 0.0}, 25.0, kGains, kParams) == 0.0);
    CHECK(acc_control(VehicleState{4.0, 25.0}, VehicleState{10.0, 25.0}, kGains,
                      kParams) == 0.0);
}

TEST_CASE("acc_control matches the written-out law on random states") {
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        const RelativeState rel{rng.uniform(-10.0, 10.0), rng.uniform(-5.0, 5.0)};
        const double v = rng.uniform(0.0, 27.78);
        const double expect = -kGains.k * rel.p_tilde -
                              kGains.k * kGains.h * (v - kParams.v_des) -
                              kGains.c * rel.v_tilde;
        REQUIRE(acc_control(rel, v, kGains, kParams) ==
                doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("linear term commands exactly full braking on the cutoff line at v = 0") {
    // On p_tilde = d - (c/k) v_tilde with v = 0 the c v_tilde contributions
    // cancel and u_lin = -k (d - h v_des) = u_min by the gain construction,
    // independent of v_tilde and of (d, h).
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        const double d = rng.uniform(2.0, 10.0);
        const double h = rng.uniform(0.01, 0.9) * d / 25.0;
        const ControllerGains g{compute_k(d, h, 25.0, kCity), h,
                                compute_c(d, h, 25.0, kCity), 1.0};
        const PlatoonParams params{d, 25.0, 2};
        const double v_tilde = rng.uniform(-5.0, 5.0);
        const RelativeState rel{d - (g.c / g.k) * v_tilde, v_tilde};
        REQUIRE(acc_control(rel, 0.0, g, params) ==
                doctest::Approx(kCity.u_min).epsilon(1e-9));
    }
}

TEST_CASE("u_ff_max closed form") {
    CHECK(u_ff_max(25.0, kGains, kParams) == doctest::Approx(15.696).epsilon(1e-13));
    // v below v_des shrinks the authority: k (d + h (20 - 25)) = 2.616 * 5.4
    CHECK(u_ff_max(20.0, kGains, kParams) == doctest::Approx(14.1264).epsilon(1e-13));
    ControllerGains half = kGains;
    half.alpha = 0.5;
    CHECK(u_ff_max(25.0, half, kParams) == doctest::Approx(7.848).epsilon(1e-13));
}

TEST_CASE("safety_filter branch order") {
    SUBCASE("emergency cutoff wins even for benign feed-forward") {
        const RelativeState rel{6.0, 0.0};  // on the cutoff line
        const auto [u, branch] = safety_filter(0.1, rel, 25.0, kGains, kParams);
        CHECK(u == 0.0);
        CHECK(branch == FilterBranch::EmergencyCutoff);
    }
    SUBCASE("approaching fast triggers the cutoff well before p_tilde = d") {
        // v_tilde = -3 shifts the line: cutoff at p_tilde >= d + 3 c/k.
        const double line = 6.0 + 3.0 * kGains.c / kGains.k;
        const auto above = safety_filter(0.0, {line + 0.01, -3.0}, 25.0, kGains, kParams);
        CHECK(above.second == FilterBranch::EmergencyCutoff);
        const auto below = safety_filter(0.0, {line - 0.01, -3.0}, 25.0, kGains, kParams);
        CHECK(below.second != FilterBranch::EmergencyCutoff);
    }
    SUBCASE("clip to the authority cap") {
        const RelativeState rel{0.0, 0.0};
        const auto [u, branch] = safety_filter(100.0, rel, 25.0, kGains, kParams);
        CHECK(u == doctest::Approx(15.696).epsilon(1e-13));
        CHECK(branch == FilterBranch::Clipped);
    }
    SUBCASE("pass-through inside the envelope") {
        const RelativeState rel{0.0, 0.0};
        const auto [u, branch] = safety_filter(-2.5, rel, 25.0, kGains, kParams);
        CHECK(u == -2.5);
        CHECK(branch == FilterBranch::PassThrough);
    }
}

TEST_CASE("sigma = 0 disables the feed-forward path entirely") {
    const ControlCommand cmd = cacc_control(RelativeState{0.0, 0.0}, 25.0,
                                            1e9, 0, kGains, kParams, kCity);
    CHECK(cmd.filter_branch == FilterBranch::SwitchedOff);
    CHECK(cmd.u_ff_raw == 0.0);
    CHECK(cmd.u_ff == 0.0);
    CHECK(cmd.u_total == 0.0);  // equilibrium linear term
}

TEST_CASE("worst-case attack cannot prevent full braking at standstill threat") {
    // Anywhere on or above the cutoff line with v = 0, the commanded total
    // equals u_min no matter what acceleration the attacker advertises.
    Rng rng(17);
    for (int i = 0; i < 2000; ++i) {
        const double v_tilde = rng.uniform(-5.0, 5.0);
        const double line = 6.0 - (kGains.c / kGains.k) * v_tilde;
        const RelativeState rel{line + rng.uniform(0.0, 4.0), v_tilde};
        const double attack = rng.uniform(-1e6, 1e6);
        const ControlCommand cmd =
            cacc_control(rel, 0.0, attack, 1, kGains, kParams, kCity);
        REQUIRE(cmd.filter_branch == FilterBranch::EmergencyCutoff);
        REQUIRE(cmd.u_total == kCity.u_min);
    }
}

TEST_CASE("property: filtered feed-forward never exceeds the authority cap") {
    Rng rng(23);
    for (int i = 0; i < 5000; ++i) {
        const RelativeState rel{rng.uniform(-10.0, 10.0), rng.uniform(-5.0, 5.0)};
        const double v = rng.uniform(0.0, 27.78);
        const double attack = rng.uniform(-1e4, 1e4);
        const ControlCommand cmd =
            cacc_control(rel, v, attack, 1, kGains, kParams, kCity);
        REQUIRE(cmd.u_ff <= u_ff_max(v, kGains, kParams) + 1e-12);
        REQUIRE(cmd.u_total <= kCity.u_max);
        REQUIRE(cmd.u_total >= kCity.u_min);
        // u_total is the saturated sum of the two published terms.
        REQUIRE(cmd.u_total ==
                doctest::Approx(saturate(cmd.u_lin + cmd.u_ff, kCity)).epsilon(1e-13));
    }
}

TEST_CASE("clipped commands are insensitive to the attack magnitude") {
    const RelativeState rel{0.0, 0.0};
    const ControlCommand at_cap =
        cacc_control(rel, 25.0, 15.696, 1, kGains, kParams, kCity);
    const ControlCommand way_above =
        cacc_control(rel, 25.0, 1e12, 1, kGains, kParams, kCity);
    CHECK(way_above.u_ff == doctest::Approx(at_cap.u_ff).epsilon(1e-13));
    CHECK(way_above.u_total == at_cap.u_total);
}

TEST_CASE("compensating policy cancels the absolute damping term") {
    const FeedForwardPolicy at_v_des = compensating_policy(kGains, kParams, 25.0);
    CHECK(at_v_des(1.5) == 1.5);
    const FeedForwardPolicy at_27 = compensating_policy(kGains, kParams, 27.0);
    CHECK(at_27(0.0) == doctest::Approx(kGains.k * kGains.h * 2.0).epsilon(1e-13));
    // With the compensating policy and zero relative error, u_total tracks
    // the predecessor's acceleration exactly (inside the envelope).
    const ControlCommand cmd = cacc_control(RelativeState{0.0, 0.0}, 27.0, 0.5, 1,
                                            kGains, kParams, kCity, at_27);
    CHECK(cmd.u_total == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("cacc_control rejects non-finite inputs") {
    CHECK_THROWS_AS(cacc_control(RelativeState{std::nan(""), 0.0}, 25.0, 0.0, 1,
                                 kGains, kParams, kCity),
                    SimulationError);
    CHECK_THROWS_AS(cacc_control(RelativeState{0.0, 0.0}, 25.0, std::nan(""), 1,
                                 kGains, kParams, kCity),
                    SimulationError);
}

TEST_CASE("leader_control tracks the reference and saturates") {
    CHECK(leader_control(25.0, 25.0, kGains, kCity) == 0.0);
    CHECK(leader_control(26.0, 25.0, kGains, kCity) ==
          doctest::Approx(-kGains.k * kGains.h).epsilon(1e-13));
    CHECK(leader_control(0.0, 1000.0, kGains, kCity) == kCity.u_max);
    CHECK(leader_control(1000.0, 0.0, kGains, kCity) == kCity.u_min);
}
