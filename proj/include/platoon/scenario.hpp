#ifndef PLATOON_SCENARIO_HPP
#define PLATOON_SCENARIO_HPP

#include "platoon/attack.hpp"
#include "platoon/detector.hpp"
#include "platoon/gain_tuning.hpp"
#include "platoon/rearrange.hpp"
#include "platoon/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace platoon {

/// Leader velocity reference: constant v_des or a sinusoid around it, with
/// an optional emergency-brake override from a given time onward.
struct LeaderProfile {
    enum class Kind { Constant, Sinusoid };
    Kind kind = Kind::Constant;
    double amplitude = 0.0;  ///< sinusoid amplitude [m/s]
    double period = 10.0;    ///< sinusoid period [s]
    std::optional<double> emergency_brake_at;  ///< u_min override from t [s]
};

/// Attack on one outbound link, keyed by the sending vehicle. In a chain
/// topology each sender has exactly one listener (its follower).
struct LinkAttack {
    int sender = 0;
    AttackSpec spec;
};

/// Either explicit gains or an auto-tune directive.
struct GainDirective {
    bool auto_tune = true;
    ControllerGains explicit_gains{0.0, 0.0, 0.0, 1.0};
    TuneOptions tune;
};

struct DetectorSettings {
    bool enabled = true;
    DetectorConfig config;
};

struct CoordinatorSettings {
    bool enabled = false;
};

/// Full description of one deterministic run.
struct ScenarioConfig {
    PlatoonParams platoon{1.0, 1.0, 2};
    ActuationLimits limits{-1.0, 1.0, 2.0};
    GainDirective gains;
    double dt = 0.05;
    double duration = 100.0;
    std::uint64_t seed = 1;
    bool cacc_enabled = true;
    bool compensating_ff = false;  ///< use the relative-tracking feed-forward variant
    LeaderProfile leader;
    std::vector<LinkAttack> attacks;
    DetectorSettings detector;
    CoordinatorSettings coordinator;
    RearrangeConfig rearrange;
    double sensor_noise_sd = 0.0;  ///< Gaussian noise on measured v_tilde [m/s]
    bool attack_v_channel = false;
    /// Keep stepping past `duration` until every vehicle has been at a
    /// standstill for 2 s (used with an emergency brake at t = duration).
    bool extend_until_standstill = false;
    double stats_from = 0.0;  ///< gap statistics window start [s]

    void validate() const;
    ControllerGains resolve_gains() const;
};

/// Parses a scenario from JSON text. Unknown keys anywhere are errors.
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

}  // namespace platoon

#endif
