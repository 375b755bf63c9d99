#ifndef PLATOON_DYNAMICS_HPP
#define PLATOON_DYNAMICS_HPP

#include "platoon/types.hpp"

namespace platoon {

/// Clamp an acceleration command to the actuator limits. Total function.
double saturate(double u, const ActuationLimits& limits) noexcept;

/// Advance one vehicle by dt using semi-implicit Euler with velocity
/// clamping to [0, v_max]: v' = clamp(v + u*dt), p' = p + v'*dt.
/// Throws SimulationError on non-finite state or input.
VehicleState step(const VehicleState& state, double u, double dt,
                  const ActuationLimits& limits);

/// Relative state of ego w.r.t. its predecessor:
/// p_tilde = p_ego - p_pred + d, v_tilde = v_ego - v_pred.
RelativeState relative_state(const VehicleState& pred, const VehicleState& ego,
                             double d) noexcept;

}  // namespace platoon

#endif
