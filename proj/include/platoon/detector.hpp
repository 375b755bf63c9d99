#ifndef PLATOON_DETECTOR_HPP
#define PLATOON_DETECTOR_HPP

#include "platoon/types.hpp"

namespace platoon {

/// Tuning of the constant-gain Kalman residual detector.
struct DetectorConfig {
    double K = 0.05;         ///< filter gain, in (0, 1)
    double r_bar = 0.75;     ///< residual threshold [m/s]
    double persistence = 0.5;  ///< required consecutive exceedance [s]

    void validate() const {
        if (!(K > 0.0 && K < 1.0))
            throw ConfigError("detector gain K must be in (0, 1)");
        if (!(r_bar > 0.0))
            throw ConfigError("detector threshold r_bar must be > 0");
        if (!(persistence >= 0.0))
            throw ConfigError("detector persistence must be >= 0");
    }
};

/// Per-link observer state. sigma latches at 0 once the alarm fires and is
/// only cleared by an explicit reset after the coordinator has finished
/// reconfiguring; the link is never re-trusted automatically.
struct DetectorState {
    double v_hat = 0.0;        ///< estimated relative velocity [m/s]
    double exceed_clock = 0.0; ///< consecutive time with r > r_bar [s]
    int sigma = 1;
    bool latched = false;
    bool initialized = false;  ///< v_hat seeds from the first measurement
};

/// One observer update:
///   v_pred  = v_hat + dt * (u_ego - u_pred_received)
///   v_hat'  = (1 - K) * v_pred + K * v_tilde_measured
///   r       = |v_hat' - v_tilde_measured|
/// The alarm latches sigma = 0 once r > r_bar for `persistence` seconds
/// consecutively. Returns the residual.
/// Throws SimulationError on non-finite inputs.
double detector_step(DetectorState& state, const DetectorConfig& config,
                     double u_ego, double u_pred_received,
                     double v_tilde_measured, double dt);

/// Re-arm after reconfiguration: reseed v_hat with the current measurement,
/// clear the alarm clock and the latch.
void reset_detector(DetectorState& state, double v_tilde_measured);

/// Smallest constant attack offset whose steady-state residual
/// |delta| * dt * (1 - K) / K exceeds the threshold.
double detectability_threshold(const DetectorConfig& config, double dt);

}  // namespace platoon

#endif
