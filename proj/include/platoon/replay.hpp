#ifndef PLATOON_REPLAY_HPP
#define PLATOON_REPLAY_HPP

#include "platoon/detector.hpp"
#include "platoon/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace platoon {

/// Optional manipulation applied while replaying a recorded trace through
/// the detector: substitute one sender's recorded acceleration with a
/// sinusoid, or add Gaussian noise to the relative-velocity measurements.
struct ReplayOverlay {
    enum class Kind { None, Sinusoid, Gaussian };
    Kind kind = Kind::None;
    int sender = 1;          ///< sender whose advertised u is substituted
    double amplitude = 0.0;  ///< sinusoid [m/s^2]
    double freq = 0.0;       ///< sinusoid [Hz]
    double phase = 0.0;      ///< sinusoid [rad]
    double sd = 0.0;         ///< Gaussian noise on v_tilde [m/s]
    std::uint64_t seed = 0;
};

struct ReplayRow {
    double t = 0.0;
    int vehicle_id = 0;
    double r = 0.0;
    int sigma = 1;
};

struct ReplayResult {
    std::vector<ReplayRow> rows;
    int alarms = 0;  ///< number of links whose alarm latched
};

/// Offline pass of the detector over a recorded trace CSV (the format
/// written by trace_to_csv). Each vehicle's recorded u_total stands in for
/// the advertised acceleration of the link it was following.
ReplayResult replay_detector(const std::string& trace_csv,
                             const DetectorConfig& config,
                             const ReplayOverlay& overlay = {});

std::string replay_to_csv(const ReplayResult& result);

}  // namespace platoon

#endif
