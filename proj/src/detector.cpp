#include "platoon/detector.hpp"

#include <cmath>

namespace platoon {

double detector_step(DetectorState& state, const DetectorConfig& config,
                     double u_ego, double u_pred_received,
                     double v_tilde_measured, double dt) {
    config.validate();
    if (!(std::isfinite(u_ego) && std::isfinite(u_pred_received) &&
          std::isfinite(v_tilde_measured)))
        throw SimulationError("detector_step: non-finite input");
    if (!(std::isfinite(dt) && dt > 0.0))
        throw SimulationError("detector_step: dt must be finite and > 0");

    if (!state.initialized) {
        state.v_hat = v_tilde_measured;
        state.initialized = true;
    }

    const double v_pred = state.v_hat + dt * (u_ego - u_pred_received);
    state.v_hat = (1.0 - config.K) * v_pred + config.K * v_tilde_measured;
    const double r = std::abs(state.v_hat - v_tilde_measured);

    if (r > config.r_bar) {
        state.exceed_clock += dt;
        // Tolerance so that summing persistence/dt steps of dt counts as
        // reaching the window despite accumulation rounding.
        if (state.exceed_clock >= config.persistence - 1e-12 && !state.latched) {
            state.latched = true;
            state.sigma = 0;
        }
    } else {
        state.exceed_clock = 0.0;
    }
    return r;
}

void reset_detector(DetectorState& state, double v_tilde_measured) {
    state.v_hat = v_tilde_measured;
    state.exceed_clock = 0.0;
    state.sigma = 1;
    state.latched = false;
    state.initialized = true;
}

double detectability_threshold(const DetectorConfig& config, double dt) {
    return config.r_bar * config.K / (dt * (1.0 - config.K));
}

}  // namespace platoon
