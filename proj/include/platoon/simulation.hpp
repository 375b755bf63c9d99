#ifndef PLATOON_SIMULATION_HPP
#define PLATOON_SIMULATION_HPP

#include "platoon/controllers.hpp"
#include "platoon/rearrange.hpp"
#include "platoon/scenario.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace platoon {

/// One trace record: a vehicle's full control breakdown at one step.
struct TraceRow {
    double t = 0.0;
    int vehicle_id = 0;
    double p = 0.0, v = 0.0;
    double u_lin = 0.0, u_ff_raw = 0.0, u_ff = 0.0, u_total = 0.0;
    FilterBranch filter_branch = FilterBranch::PassThrough;
    double gap = 0.0;  ///< distance to the followed vehicle [m]; NaN if none
    double p_tilde = 0.0, v_tilde = 0.0;
    int sigma = 1;
    double r = 0.0;
    Lane lane = Lane::SL;
    VLevel v_level = VLevel::Default;
    int vtf = 0;  ///< vehicle currently followed, 0 = none
};

extern const char* const kTraceHeader;

std::string trace_to_csv(const std::vector<TraceRow>& trace);
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Gap statistics of one vehicle over the stats window.
struct GapStats {
    long count = 0;
    double mean = 0.0, stddev = 0.0;
    double min = 0.0, max = 0.0;
};

/// Detection bookkeeping of one inbound link, keyed by the receiving vehicle.
struct LinkReport {
    std::optional<double> detection_latency;  ///< alarm time - attack onset [s]
    int false_alarms = 0;
};

struct RunMetrics {
    bool collision = false;
    std::optional<double> collision_time;
    std::map<int, double> min_gap;  ///< rear vehicle id -> min same-lane gap [m]
    std::map<int, GapStats> gap_stats;
    std::map<int, LinkReport> links;
    std::optional<double> reconfig_completion_time;  ///< duration of the maneuver [s]
    double min_gap_overall = 0.0;
    double min_gap_attack_phase = 0.0;  ///< before the emergency brake
    double min_gap_brake_phase = 0.0;   ///< from the emergency brake on
    double simulated_time = 0.0;
    /// True if every run phase ended with all vehicles in the slow lane at
    /// their assigned position.
    bool all_at_cpp = true;
    double max_residual_post_reconfig = 0.0;
};

struct RunResult {
    std::vector<TraceRow> trace;
    RunMetrics metrics;
    ControllerGains gains;
};

/// Runs one deterministic scenario. With collect_trace = false only metrics
/// are produced (used by the campaign runner).
RunResult run_scenario(const ScenarioConfig& config, bool collect_trace = true);

std::string metrics_to_csv(const RunMetrics& metrics);

}  // namespace platoon

#endif
