#include "platoon/rearrange.hpp"

#include <algorithm>

namespace platoon {

const char* to_string(Lane lane) { return lane == Lane::SL ? "SL" : "FL"; }

const char* to_string(VLevel level) {
    switch (level) {
        case VLevel::Slow: return "slow";
        case VLevel::Default: return "default";
        case VLevel::Fast: return "fast";
    }
    return "?";
}

const char* to_string(LaneCmd cmd) {
    switch (cmd) {
        case LaneCmd::Stay: return "stay";
        case LaneCmd::ToFL: return "to_FL";
        case LaneCmd::ToSL: return "to_SL";
    }
    return "?";
}

namespace {

// A predecessor signaling the merge counts as being in the slow lane; this
// disambiguates the follow-it-back case from continuing the overtake.
bool ap_in_slow_lane(const SupervisorInput& inp) {
    return inp.ap_msl || (inp.ap_lane && *inp.ap_lane == Lane::SL);
}

}  // namespace

VLevel velocity_manager(const SupervisorInput& inp) {
    if (inp.lane == Lane::SL)
        return inp.ap == inp.op ? VLevel::Default : VLevel::Slow;
    return ap_in_slow_lane(inp) ? VLevel::Default : VLevel::Fast;
}

int vtf_manager(const SupervisorInput& inp) {
    if (inp.ap == inp.op)
        return inp.ap;
    if (inp.lane == Lane::SL)
        return 0;
    const auto closest = std::min_element(
        inp.fl_ahead.begin(), inp.fl_ahead.end(),
        [](const FlVehicleAhead& a, const FlVehicleAhead& b) {
            return a.distance < b.distance;
        });
    return closest == inp.fl_ahead.end() ? 0 : closest->id;
}

LaneCmd lane_manager(const SupervisorInput& inp, bool gap_behind_ok) {
    if (inp.ap == 0) {
        // Designated leader: overtake anything still ahead of it, then merge
        // back once the road in front is clear.
        if (inp.lane == Lane::SL)
            return inp.op != 0 ? LaneCmd::ToFL : LaneCmd::Stay;
        return (inp.cleared_vehicles_to_pass && gap_behind_ok) ? LaneCmd::ToSL
                                                               : LaneCmd::Stay;
    }
    if (inp.lane == Lane::SL) {
        if (inp.ap == inp.op)
            return LaneCmd::Stay;  // correct platooning position
        // Overtake only once the assigned predecessor has settled in the slow
        // lane somewhere ahead; until then hold the slow lane (and, when the
        // predecessor is behind, wait to be overtaken). This sequences the
        // maneuver and keeps vehicles from chasing an overtaker into the
        // fast lane.
        return (inp.ap_is_ahead && ap_in_slow_lane(inp)) ? LaneCmd::ToFL
                                                         : LaneCmd::Stay;
    }
    if (ap_in_slow_lane(inp) && inp.cleared_vehicles_to_pass && gap_behind_ok)
        return LaneCmd::ToSL;
    return LaneCmd::Stay;
}

bool at_cpp(const SupervisorInput& inp) {
    return inp.lane == Lane::SL && inp.ap == inp.op;
}

}  // namespace platoon
