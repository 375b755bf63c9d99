#include "platoon/controllers.hpp"

namespace platoon {

const char* to_string(FilterBranch branch) {
    switch (branch) {
        case FilterBranch::EmergencyCutoff: return "EmergencyCutoff";
        case FilterBranch::Clipped: return "Clipped";
        case FilterBranch::PassThrough: return "PassThrough";
        case FilterBranch::SwitchedOff: return "SwitchedOff";
    }
    return "?";
}

double acc_control(const RelativeState& rel, double v_ego,
                   const ControllerGains& gains, const PlatoonParams& params) {
    return -gains.k * rel.p_tilde - gains.k * gains.h * (v_ego - params.v_des) -
           gains.c * rel.v_tilde;
}

double acc_control(const VehicleState& ego, const VehicleState& pred,
                   const ControllerGains& gains, const PlatoonParams& params) {
    return acc_control(relative_state(pred, ego, params.d), ego.v, gains, params);
}

double identity_policy(double u_received) { return u_received; }

FeedForwardPolicy compensating_policy(const ControllerGains& gains,
                                      const PlatoonParams& params, double v_ego) {
    const double correction = gains.k * gains.h * (v_ego - params.v_des);
    return [correction](double u_received) { return u_received + correction; };
}

double u_ff_max(double v, const ControllerGains& gains, const PlatoonParams& params) {
    return gains.k * (gains.alpha * params.d + gains.h * (v - params.v_des));
}

std::pair<double, FilterBranch> safety_filter(double u_ff_raw,
                                              const RelativeState& rel, double v,
                                              const ControllerGains& gains,
                                              const PlatoonParams& params) {
    if (rel.p_tilde >= params.d - (gains.c / gains.k) * rel.v_tilde)
        return {0.0, FilterBranch::EmergencyCutoff};
    const double cap = u_ff_max(v, gains, params);
    if (u_ff_raw >= cap)
        return {cap, FilterBranch::Clipped};
    return {u_ff_raw, FilterBranch::PassThrough};
}

ControlCommand cacc_control(const RelativeState& rel, double v_ego,
                            double u_received, int sigma,
                            const ControllerGains& gains,
                            const PlatoonParams& params,
                            const ActuationLimits& limits,
                            const FeedForwardPolicy& policy) {
    if (!std::isfinite(v_ego) || !std::isfinite(rel.p_tilde) ||
        !std::isfinite(rel.v_tilde))
        throw SimulationError("cacc_control: non-finite sensed state");

    ControlCommand cmd;
    cmd.sigma = sigma;
    cmd.u_lin = acc_control(rel, v_ego, gains, params);

    if (sigma == 0) {
        cmd.u_ff_raw = 0.0;
        cmd.u_ff = 0.0;
        cmd.filter_branch = FilterBranch::SwitchedOff;
        cmd.u_total = saturate(cmd.u_lin, limits);
        return cmd;
    }

    if (!std::isfinite(u_received))
        throw SimulationError("cacc_control: non-finite received acceleration");
    cmd.u_ff_raw = policy(u_received);
    if (!std::isfinite(cmd.u_ff_raw))
        throw SimulationError("cacc_control: feed-forward policy returned non-finite value");
    const auto [filtered, branch] = safety_filter(cmd.u_ff_raw, rel, v_ego, gains, params);
    cmd.u_ff = filtered;
    cmd.filter_branch = branch;
    cmd.u_total = saturate(cmd.u_lin + cmd.u_ff, limits);
    return cmd;
}

ControlCommand cacc_control(const VehicleState& ego, const VehicleState& pred,
                            double u_received, int sigma,
                            const ControllerGains& gains,
                            const PlatoonParams& params,
                            const ActuationLimits& limits,
                            const FeedForwardPolicy& policy) {
    return cacc_control(relative_state(pred, ego, params.d), ego.v, u_received,
                        sigma, gains, params, limits, policy);
}

double leader_control(double v, double v_ref, const ControllerGains& gains,
                      const ActuationLimits& limits) {
    return saturate(-gains.k * gains.h * (v - v_ref), limits);
}

}  // namespace platoon
