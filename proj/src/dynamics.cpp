#include "platoon/dynamics.hpp"

#include <algorithm>

namespace platoon {

double saturate(double u, const ActuationLimits& limits) noexcept {
    return std::clamp(u, limits.u_min, limits.u_max);
}

VehicleState step(const VehicleState& state, double u, double dt,
                  const ActuationLimits& limits) {
    if (!(std::isfinite(state.p) && std::isfinite(state.v)))
        throw SimulationError("step: non-finite vehicle state");
    if (!std::isfinite(u))
        throw SimulationError("step: non-finite acceleration input");
    if (!(std::isfinite(dt) && dt > 0.0))
        throw SimulationError("step: dt must be finite and > 0");

    // Velocity is clamped before the position update so that p advances
    // with the realized velocity (a stopped vehicle does not move backwards).
    const double v_next = std::clamp(state.v + u * dt, 0.0, limits.v_max);
    return VehicleState{state.p + v_next * dt, v_next};
}

RelativeState relative_state(const VehicleState& pred, const VehicleState& ego,
                             double d) noexcept {
    return RelativeState{ego.p - pred.p + d, ego.v - pred.v};
}

}  // namespace platoon
