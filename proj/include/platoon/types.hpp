#ifndef PLATOON_TYPES_HPP
#define PLATOON_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace platoon {

/// Configuration or scenario-file errors. Mapped to exit code 1 by the CLI.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runtime aborts (non-finite values, malformed inputs mid-run). Exit code 2.
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shared actuator limits of the homogeneous platoon.
struct ActuationLimits {
    double u_min;  ///< maximum braking [m/s^2], strictly negative
    double u_max;  ///< maximum acceleration [m/s^2], strictly positive
    double v_max;  ///< maximum velocity [m/s], strictly positive

    void validate() const {
        if (!(std::isfinite(u_min) && std::isfinite(u_max) && std::isfinite(v_max)))
            throw ConfigError("actuation limits must be finite");
        if (!(u_min < 0.0))
            throw ConfigError("u_min must be strictly negative");
        if (!(u_max > 0.0))
            throw ConfigError("u_max must be strictly positive");
        if (!(v_max > 0.0))
            throw ConfigError("v_max must be strictly positive");
    }
};

/// Absolute longitudinal state of one vehicle.
struct VehicleState {
    double p;  ///< position [m]
    double v;  ///< velocity [m/s]
};

/// Relative state between a vehicle and its predecessor.
/// p_tilde = p_ego - p_pred + d, so p_tilde = d means zero gap (collision
/// boundary) and p_tilde = 0 means the vehicle sits exactly at spacing d.
struct RelativeState {
    double p_tilde;  ///< shifted relative position [m]
    double v_tilde;  ///< relative velocity [m/s]
};

/// Platoon-wide set points shared by every vehicle.
struct PlatoonParams {
    double d;      ///< desired inter-vehicle distance [m], > 0
    double v_des;  ///< desired platoon velocity [m/s], 0 < v_des < v_max
    int n = 2;     ///< vehicle count, >= 2

    void validate(const ActuationLimits& limits) const {
        if (!(std::isfinite(d) && d > 0.0))
            throw ConfigError("desired distance d must be finite and > 0");
        if (!(std::isfinite(v_des) && v_des > 0.0 && v_des < limits.v_max))
            throw ConfigError("v_des must satisfy 0 < v_des < v_max");
        if (n < 2)
            throw ConfigError("platoon needs at least 2 vehicles");
    }
};

}  // namespace platoon

#endif
