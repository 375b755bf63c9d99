#ifndef PLATOON_REARRANGE_HPP
#define PLATOON_REARRANGE_HPP

#include "platoon/types.hpp"

#include <optional>
#include <vector>

namespace platoon {

enum class Lane { SL, FL };
enum class VLevel { Slow, Default, Fast };
enum class LaneCmd { Stay, ToFL, ToSL };

const char* to_string(Lane lane);
const char* to_string(VLevel level);
const char* to_string(LaneCmd cmd);

/// A vehicle visible ahead in the fast lane.
struct FlVehicleAhead {
    int id = 0;
    double distance = 0.0;  ///< longitudinal distance ahead of ego [m]
};

/// Everything the per-vehicle supervisor sees at one step.
struct SupervisorInput {
    int ap = 0;  ///< assigned predecessor id, 0 = designated leader
    int op = 0;  ///< observed predecessor (closest vehicle ahead, any lane), 0 = none
    Lane lane = Lane::SL;
    std::optional<Lane> ap_lane;  ///< nullopt when unknown (ap = 0)
    bool ap_msl = false;          ///< assigned predecessor signaling merge to SL
    bool ap_is_ahead = false;     ///< assigned predecessor physically ahead of ego
    /// true once ego is ahead of every vehicle ordered behind it in the new
    /// topology; gates the merge back to the slow lane.
    bool cleared_vehicles_to_pass = false;
    std::vector<FlVehicleAhead> fl_ahead;
};

/// Velocity-level selection.
///   SL: default when AP = OP, otherwise slow (wait to be overtaken).
///   FL: default when the assigned predecessor is already in SL, else fast.
VLevel velocity_manager(const SupervisorInput& inp);

/// Vehicle-to-follow selection. Switching targets is only allowed once the
/// assigned predecessor is directly observed ahead; meanwhile vehicles in
/// the slow lane track the velocity reference (0) and vehicles in the fast
/// lane follow the closest preceding vehicle in their lane.
int vtf_manager(const SupervisorInput& inp);

/// Lane command. Merging to the fast lane is always allowed; merging back to
/// the slow lane requires gap_behind_ok.
LaneCmd lane_manager(const SupervisorInput& inp, bool gap_behind_ok);

/// Correct platooning position: in the slow lane with the observed
/// predecessor equal to the assigned one (0 = 0 for the leader in front).
bool at_cpp(const SupervisorInput& inp);

/// Knobs of the rearrangement maneuver.
struct RearrangeConfig {
    double lane_change_duration = 1.5;  ///< [s]; vehicle occupies both lanes meanwhile
    double merge_gap = 0.0;  ///< required gap behind for ToSL; 0 = use platoon d
    double slow_factor = 0.8;
    double fast_factor = 1.2;
};

}  // namespace platoon

#endif
