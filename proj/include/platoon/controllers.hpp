#ifndef PLATOON_CONTROLLERS_HPP
#define PLATOON_CONTROLLERS_HPP

#include "platoon/dynamics.hpp"
#include "platoon/gain_tuning.hpp"

#include <functional>
#include <utility>

namespace platoon {

/// Which branch of the feed-forward safety filter fired.
enum class FilterBranch {
    EmergencyCutoff,  ///< state on or above the braking saturation line, u_ff = 0
    Clipped,          ///< raw feed-forward clipped to u_ff_max(v)
    PassThrough,      ///< raw feed-forward within authority, used as-is
    SwitchedOff,      ///< sigma = 0, feed-forward disabled entirely
};

const char* to_string(FilterBranch branch);

/// Full breakdown of one vehicle's control computation.
struct ControlCommand {
    double u_lin = 0.0;     ///< linear ACC term, unsaturated [m/s^2]
    double u_ff_raw = 0.0;  ///< feed-forward policy output before filtering
    double u_ff = 0.0;      ///< feed-forward after safety filter and sigma gate
    int sigma = 1;          ///< trust flag applied
    double u_total = 0.0;   ///< saturate(u_lin + sigma * u_ff)
    FilterBranch filter_branch = FilterBranch::PassThrough;
};

/// Linear ACC law:
///   u_lin = -k (p_ego - p_pred + d) - k h (v_ego - v_des) - c (v_ego - v_pred)
/// Returned unsaturated.
double acc_control(const VehicleState& ego, const VehicleState& pred,
                   const ControllerGains& gains, const PlatoonParams& params);

/// Same law written on the sensed relative state.
double acc_control(const RelativeState& rel, double v_ego,
                   const ControllerGains& gains, const PlatoonParams& params);

/// Feed-forward policy: pure function of the received predecessor acceleration.
using FeedForwardPolicy = std::function<double(double)>;

/// Default policy: copy the predecessor's acceleration.
double identity_policy(double u_received);

/// Variant that additionally cancels the absolute damping term, giving
/// perfect relative-distance tracking: pi(u) = u + k h (v_ego - v_des).
FeedForwardPolicy compensating_policy(const ControllerGains& gains,
                                      const PlatoonParams& params, double v_ego);

/// State-dependent feed-forward authority cap:
///   u_ff_max(v) = k (alpha d + h (v - v_des))
double u_ff_max(double v, const ControllerGains& gains, const PlatoonParams& params);

/// Three-branch safety filter. Branch order is fixed: emergency cutoff,
/// then authority clip, then pass-through.
std::pair<double, FilterBranch> safety_filter(double u_ff_raw,
                                              const RelativeState& rel, double v,
                                              const ControllerGains& gains,
                                              const PlatoonParams& params);

/// Full CACC step on sensed quantities: linear term plus sigma-gated,
/// safety-filtered feed-forward, saturated once on the sum.
ControlCommand cacc_control(const RelativeState& rel, double v_ego,
                            double u_received, int sigma,
                            const ControllerGains& gains,
                            const PlatoonParams& params,
                            const ActuationLimits& limits,
                            const FeedForwardPolicy& policy = identity_policy);

/// Convenience overload on absolute states.
ControlCommand cacc_control(const VehicleState& ego, const VehicleState& pred,
                            double u_received, int sigma,
                            const ControllerGains& gains,
                            const PlatoonParams& params,
                            const ActuationLimits& limits,
                            const FeedForwardPolicy& policy = identity_policy);

/// Leader velocity-tracking law: u = -k h (v - v_ref), saturated.
double leader_control(double v, double v_ref, const ControllerGains& gains,
                      const ActuationLimits& limits);

}  // namespace platoon

#endif
