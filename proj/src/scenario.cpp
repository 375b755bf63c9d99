#include "platoon/scenario.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace platoon {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ConfigError("scenario: '" + where + "' must be an object");
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError("scenario: unknown key '" + key + "' in " + where);
}

double number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_number())
        throw ConfigError("scenario: '" + key + "' must be a number");
    return obj.at(key).get<double>();
}

bool boolean(const json& obj, const std::string& key, bool fallback) {
    if (!obj.contains(key))
        return fallback;
    if (!obj.at(key).is_boolean())
        throw ConfigError("scenario: '" + key + "' must be a boolean");
    return obj.at(key).get<bool>();
}

AttackSpec parse_attack_spec(const json& obj, const std::string& where) {
    require_keys(obj, where,
                 {"sender", "kind", "bias", "constant", "amplitude", "phase",
                  "freq", "tau", "period", "delta_fake", "active_from",
                  "active_to"});
    AttackSpec spec;
    if (!obj.contains("kind"))
        throw ConfigError("scenario: attack entry missing 'kind'");
    spec.kind = attack_kind_from_string(obj.at("kind").get<std::string>());
    spec.bias = number(obj, "bias", spec.bias);
    spec.constant = number(obj, "constant", spec.constant);
    spec.amplitude = number(obj, "amplitude", spec.amplitude);
    spec.phase = number(obj, "phase", spec.phase);
    spec.freq = number(obj, "freq", spec.freq);
    spec.tau = number(obj, "tau", spec.tau);
    spec.period = number(obj, "period", spec.period);
    spec.active_from = number(obj, "active_from", spec.active_from);
    spec.active_to = number(obj, "active_to", spec.active_to);
    if (obj.contains("delta_fake")) {
        const json& delta = obj.at("delta_fake");
        require_keys(delta, where + ".delta_fake", {"pred", "succ"});
        spec.delta_fake.pred_id = static_cast<int>(number(delta, "pred", 0));
        spec.delta_fake.succ_id = static_cast<int>(number(delta, "succ", 0));
    }
    return spec;
}

}  // namespace

void ScenarioConfig::validate() const {
    limits.validate();
    platoon.validate(limits);
    if (!(dt > 0.0))
        throw ConfigError("scenario: dt must be > 0");
    if (!(duration > 0.0))
        throw ConfigError("scenario: duration must be > 0");
    if (!(sensor_noise_sd >= 0.0))
        throw ConfigError("scenario: sensor_noise_sd must be >= 0");
    if (!(stats_from >= 0.0))
        throw ConfigError("scenario: stats_from must be >= 0");
    if (leader.kind == LeaderProfile::Kind::Sinusoid && !(leader.period > 0.0))
        throw ConfigError("scenario: sinusoid period must be > 0");
    detector.config.validate();
    if (!(rearrange.lane_change_duration > 0.0))
        throw ConfigError("scenario: lane_change_duration must be > 0");
    for (const LinkAttack& attack : attacks) {
        if (attack.sender < 1 || attack.sender > platoon.n)
            throw ConfigError("scenario: attack sender outside vehicle id range");
        attack.spec.validate(limits);
    }
    if (!gains.auto_tune) {
        const ControllerGains& g = gains.explicit_gains;
        if (!(g.k > 0.0 && g.c > 0.0 && g.h > 0.0))
            throw ConfigError("scenario: explicit gains must be positive");
        if (!(g.alpha >= 0.0 && g.alpha <= 1.0))
            throw ConfigError("scenario: alpha must be in [0, 1]");
    }
}

ControllerGains ScenarioConfig::resolve_gains() const {
    if (gains.auto_tune)
        return tune_gains(platoon.d, platoon.v_des, limits, gains.tune);
    return gains.explicit_gains;
}

ScenarioConfig scenario_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    require_keys(root, "scenario",
                 {"platoon", "limits", "gains", "dt", "duration", "seed",
                  "cacc_enabled", "compensating_ff", "leader", "attacks",
                  "detector", "coordinator", "rearrange", "sensor_noise_sd",
                  "attack_v_channel", "extend_until_standstill", "stats_from"});

    ScenarioConfig config;
    if (root.contains("platoon")) {
        const json& obj = root.at("platoon");
        require_keys(obj, "platoon", {"d", "v_des", "n"});
        config.platoon.d = number(obj, "d", config.platoon.d);
        config.platoon.v_des = number(obj, "v_des", config.platoon.v_des);
        config.platoon.n = static_cast<int>(number(obj, "n", config.platoon.n));
    }
    if (root.contains("limits")) {
        const json& obj = root.at("limits");
        require_keys(obj, "limits", {"u_min", "u_max", "v_max"});
        config.limits.u_min = number(obj, "u_min", config.limits.u_min);
        config.limits.u_max = number(obj, "u_max", config.limits.u_max);
        config.limits.v_max = number(obj, "v_max", config.limits.v_max);
    }
    if (root.contains("gains")) {
        const json& obj = root.at("gains");
        require_keys(obj, "gains",
                     {"mode", "k", "h", "c", "alpha", "h_resolution"});
        const std::string mode =
            obj.contains("mode") ? obj.at("mode").get<std::string>() : "auto";
        if (mode == "auto") {
            config.gains.auto_tune = true;
            config.gains.tune.h_resolution =
                number(obj, "h_resolution", config.gains.tune.h_resolution);
            config.gains.tune.alpha = number(obj, "alpha", config.gains.tune.alpha);
        } else if (mode == "explicit") {
            config.gains.auto_tune = false;
            for (const char* key : {"k", "h", "c"})
                if (!obj.contains(key))
                    throw ConfigError(
                        std::string("scenario: explicit gains require '") + key + "'");
            config.gains.explicit_gains.k = number(obj, "k", 0.0);
            config.gains.explicit_gains.h = number(obj, "h", 0.0);
            config.gains.explicit_gains.c = number(obj, "c", 0.0);
            config.gains.explicit_gains.alpha = number(obj, "alpha", 1.0);
        } else {
            throw ConfigError("scenario: gains.mode must be 'auto' or 'explicit'");
        }
    }
    config.dt = number(root, "dt", config.dt);
    config.duration = number(root, "duration", config.duration);
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned())
            throw ConfigError("scenario: seed must be a non-negative integer");
        config.seed = root.at("seed").get<std::uint64_t>();
    }
    config.cacc_enabled = boolean(root, "cacc_enabled", config.cacc_enabled);
    config.compensating_ff = boolean(root, "compensating_ff", config.compensating_ff);
    if (root.contains("leader")) {
        const json& obj = root.at("leader");
        require_keys(obj, "leader",
                     {"profile", "amplitude", "period", "emergency_brake_at"});
        const std::string profile =
            obj.contains("profile") ? obj.at("profile").get<std::string>()
                                    : "constant";
        if (profile == "constant")
            config.leader.kind = LeaderProfile::Kind::Constant;
        else if (profile == "sinusoid")
            config.leader.kind = LeaderProfile::Kind::Sinusoid;
        else
            throw ConfigError("scenario: leader.profile must be 'constant' or 'sinusoid'");
        config.leader.amplitude = number(obj, "amplitude", config.leader.amplitude);
        config.leader.period = number(obj, "period", config.leader.period);
        if (obj.contains("emergency_brake_at"))
            config.leader.emergency_brake_at = number(obj, "emergency_brake_at", 0.0);
    }
    if (root.contains("attacks")) {
        const json& list = root.at("attacks");
        if (!list.is_array())
            throw ConfigError("scenario: 'attacks' must be an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            std::ostringstream where;
            where << "attacks[" << i << "]";
            const json& obj = list.at(i);
            LinkAttack attack;
            attack.spec = parse_attack_spec(obj, where.str());
            if (!obj.contains("sender"))
                throw ConfigError("scenario: attack entry missing 'sender'");
            attack.sender = static_cast<int>(number(obj, "sender", 0));
            config.attacks.push_back(attack);
        }
    }
    if (root.contains("detector")) {
        const json& obj = root.at("detector");
        require_keys(obj, "detector", {"enabled", "K", "r_bar", "persistence"});
        config.detector.enabled = boolean(obj, "enabled", config.detector.enabled);
        config.detector.config.K = number(obj, "K", config.detector.config.K);
        config.detector.config.r_bar =
            number(obj, "r_bar", config.detector.config.r_bar);
        config.detector.config.persistence =
            number(obj, "persistence", config.detector.config.persistence);
    }
    if (root.contains("coordinator")) {
        const json& obj = root.at("coordinator");
        require_keys(obj, "coordinator", {"enabled"});
        config.coordinator.enabled =
            boolean(obj, "enabled", config.coordinator.enabled);
    }
    if (root.contains("rearrange")) {
        const json& obj = root.at("rearrange");
        require_keys(obj, "rearrange",
                     {"lane_change_duration", "merge_gap", "slow_factor",
                      "fast_factor"});
        config.rearrange.lane_change_duration = number(
            obj, "lane_change_duration", config.rearrange.lane_change_duration);
        config.rearrange.merge_gap =
            number(obj, "merge_gap", config.rearrange.merge_gap);
        config.rearrange.slow_factor =
            number(obj, "slow_factor", config.rearrange.slow_factor);
        config.rearrange.fast_factor =
            number(obj, "fast_factor", config.rearrange.fast_factor);
    }
    config.sensor_noise_sd =
        number(root, "sensor_noise_sd", config.sensor_noise_sd);
    config.attack_v_channel =
        boolean(root, "attack_v_channel", config.attack_v_channel);
    config.extend_until_standstill =
        boolean(root, "extend_until_standstill", config.extend_until_standstill);
    config.stats_from = number(root, "stats_from", config.stats_from);

    config.validate();
    return config;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return scenario_from_json(buffer.str());
}

}  // namespace platoon
