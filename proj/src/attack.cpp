#include "platoon/attack.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace platoon {

const char* to_string(AttackKind kind) {
    switch (kind) {
        case AttackKind::None: return "none";
        case AttackKind::Additive: return "additive";
        case AttackKind::ReplaceConstant: return "constant";
        case AttackKind::ReplaceSinusoid: return "sinusoid";
        case AttackKind::ReplaceFilteredNoise: return "filtered-noise";
        case AttackKind::DenialOfService: return "dos";
        case AttackKind::AlternatingExtremes: return "alternating";
        case AttackKind::FalseTopology: return "false-topology";
    }
    return "?";
}

AttackKind attack_kind_from_string(const std::string& name) {
    for (AttackKind kind :
         {AttackKind::None, AttackKind::Additive, AttackKind::ReplaceConstant,
          AttackKind::ReplaceSinusoid, AttackKind::ReplaceFilteredNoise,
          AttackKind::DenialOfService, AttackKind::AlternatingExtremes,
          AttackKind::FalseTopology})
        if (name == to_string(kind))
            return kind;
    throw ConfigError("unknown attack kind: " + name);
}

void AttackSpec::validate(const ActuationLimits& limits) const {
    if (!(active_from >= 0.0 && active_from < active_to))
        throw ConfigError("attack window must satisfy 0 <= active_from < active_to");
    const double cap = std::min(limits.u_max, -limits.u_min);
    switch (kind) {
        case AttackKind::ReplaceConstant:
            if (constant < limits.u_min || constant > limits.u_max)
                throw ConfigError("constant replacement signal outside actuation limits");
            break;
        case AttackKind::ReplaceSinusoid:
            if (std::abs(amplitude) > cap)
                throw ConfigError("sinusoid amplitude outside actuation limits");
            break;
        case AttackKind::ReplaceFilteredNoise:
            if (!(tau > 0.0))
                throw ConfigError("noise filter time constant must be > 0");
            break;
        case AttackKind::AlternatingExtremes:
            if (!(period > 0.0))
                throw ConfigError("alternating attack period must be > 0");
            break;
        default:
            break;
    }
}

std::optional<CommFrame> apply_attack(const CommFrame& frame, double t,
                                      const AttackSpec& spec, ChannelState& state,
                                      double dt, const ActuationLimits& limits,
                                      bool attack_v) {
    if (!std::isfinite(t))
        throw SimulationError("apply_attack: non-finite time");
    if (spec.kind == AttackKind::None || t < spec.active_from || t >= spec.active_to)
        return frame;

    CommFrame out = frame;
    switch (spec.kind) {
        case AttackKind::Additive:
            out.u = std::clamp(frame.u + spec.bias, limits.u_min, limits.u_max);
            break;
        case AttackKind::ReplaceConstant:
            out.u = spec.constant;
            break;
        case AttackKind::ReplaceSinusoid:
            out.u = spec.amplitude *
                    std::sin(spec.phase + 2.0 * std::numbers::pi * spec.freq * t);
            break;
        case AttackKind::ReplaceFilteredNoise: {
            const double e = state.rng.uniform(limits.u_min, limits.u_max);
            state.filter_state += (dt / spec.tau) * (e - state.filter_state);
            out.u = state.filter_state;
            break;
        }
        case AttackKind::DenialOfService:
            return std::nullopt;
        case AttackKind::AlternatingExtremes: {
            const auto cycles =
                static_cast<long long>(std::floor((t - spec.active_from) / spec.period));
            out.u = (cycles % 2 == 0) ? limits.u_max : limits.u_min;
            break;
        }
        case AttackKind::FalseTopology:
            out.delta = spec.delta_fake;
            break;
        case AttackKind::None:
            break;
    }
    if (attack_v && spec.kind != AttackKind::FalseTopology)
        out.v = frame.v + (out.u - frame.u);
    return out;
}

AttackSpec randomize_attack_params(AttackKind kind, const ActuationLimits& limits,
                                   Rng& rng, const RandomizeRanges& ranges) {
    AttackSpec spec;
    spec.kind = kind;
    switch (kind) {
        case AttackKind::ReplaceConstant:
            spec.constant = rng.uniform(limits.u_min, limits.u_max);
            break;
        case AttackKind::ReplaceSinusoid:
            spec.amplitude = rng.uniform(0.0, std::min(limits.u_max, -limits.u_min));
            spec.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
            spec.freq = rng.uniform(ranges.freq_lo, ranges.freq_hi);
            break;
        case AttackKind::ReplaceFilteredNoise:
            spec.tau = rng.uniform(ranges.tau_lo, ranges.tau_hi);
            break;
        case AttackKind::Additive:
            spec.bias = rng.uniform(limits.u_min, limits.u_max);
            break;
        case AttackKind::AlternatingExtremes:
        case AttackKind::DenialOfService:
        case AttackKind::FalseTopology:
        case AttackKind::None:
            break;
    }
    return spec;
}

}  // namespace platoon
