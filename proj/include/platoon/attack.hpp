#ifndef PLATOON_ATTACK_HPP
#define PLATOON_ATTACK_HPP

#include "platoon/coordinator.hpp"
#include "platoon/rng.hpp"
#include "platoon/types.hpp"

#include <optional>
#include <string>

namespace platoon {

/// One V2V payload. sender_id always matches the physical sender: the
/// channel content is attacked, never the identity.
struct CommFrame {
    int sender_id = 0;
    double u = 0.0;  ///< advertised acceleration [m/s^2]
    double v = 0.0;  ///< advertised velocity [m/s]
    double p = 0.0;  ///< advertised map position [m]
    DeltaVec delta;  ///< topology row
};

enum class AttackKind {
    None,
    Additive,             ///< u += bias, clamped to the limits
    ReplaceConstant,      ///< u := c
    ReplaceSinusoid,      ///< u := a * sin(phi + 2*pi*f*t)
    ReplaceFilteredNoise, ///< u := first-order filtered U[u_min, u_max]
    DenialOfService,      ///< frame absent
    AlternatingExtremes,  ///< u := u_max / u_min, switching every period
    FalseTopology,        ///< delta := delta_fake, u untouched
};

const char* to_string(AttackKind kind);
AttackKind attack_kind_from_string(const std::string& name);

/// Corruption model of one outbound link.
struct AttackSpec {
    AttackKind kind = AttackKind::None;
    double bias = 0.0;       ///< Additive
    double constant = 0.0;   ///< ReplaceConstant
    double amplitude = 0.0;  ///< ReplaceSinusoid
    double phase = 0.0;      ///< ReplaceSinusoid [rad]
    double freq = 0.0;       ///< ReplaceSinusoid [Hz]
    double tau = 1.0;        ///< ReplaceFilteredNoise time constant [s]
    double period = 5.0;     ///< AlternatingExtremes switching period [s]
    DeltaVec delta_fake;     ///< FalseTopology
    double active_from = 0.0;
    double active_to = 1e18;

    void validate(const ActuationLimits& limits) const;
};

/// Mutable per-link state owned by the channel (noise filter memory and the
/// draw stream for filtered-noise attacks).
struct ChannelState {
    double filter_state = 0.0;
    Rng rng{0};
};

/// Applies the attack to an outbound frame at time t. Returns nullopt for a
/// denial of service inside the active window; otherwise the (possibly
/// corrupted) frame. attack_v additionally corrupts the advertised velocity
/// with the same distortion applied to u (off by default at the scenario
/// level; the baseline model attacks intended-motion data only).
std::optional<CommFrame> apply_attack(const CommFrame& frame, double t,
                                      const AttackSpec& spec, ChannelState& state,
                                      double dt, const ActuationLimits& limits,
                                      bool attack_v = false);

/// Ranges for randomized attack parameters where the attack model leaves
/// them free.
struct RandomizeRanges {
    double freq_lo = 0.05, freq_hi = 2.0;  ///< sinusoid frequency [Hz]
    double tau_lo = 0.1, tau_hi = 2.0;     ///< noise filter time constant [s]
};

/// Draws a per-link attack of the given kind with randomized parameters.
/// Deterministic for a given stream state; every replacement signal stays
/// within [u_min, u_max] by construction.
AttackSpec randomize_attack_params(AttackKind kind, const ActuationLimits& limits,
                                   Rng& rng, const RandomizeRanges& ranges = {});

}  // namespace platoon

#endif
