#include "platoon/simulation.hpp"

#include "platoon/coordinator.hpp"
#include "platoon/csv.hpp"
#include "platoon/detector.hpp"
#include "platoon/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace platoon {

const char* const kTraceHeader =
    "t,vehicle_id,p,v,u_lin,u_ff_raw,u_ff,u_total,filter_branch,gap,p_tilde,"
    "v_tilde,sigma,r,lane,v_level,vtf";

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
    std::ostringstream out;
    out << kTraceHeader << '\n';
    for (const TraceRow& row : trace) {
        out << csv::format(row.t) << ',' << row.vehicle_id << ','
            << csv::format(row.p) << ',' << csv::format(row.v) << ','
            << csv::format(row.u_lin) << ',' << csv::format(row.u_ff_raw) << ','
            << csv::format(row.u_ff) << ',' << csv::format(row.u_total) << ','
            << to_string(row.filter_branch) << ',' << csv::format(row.gap) << ','
            << csv::format(row.p_tilde) << ',' << csv::format(row.v_tilde) << ','
            << row.sigma << ',' << csv::format(row.r) << ','
            << to_string(row.lane) << ',' << to_string(row.v_level) << ','
            << row.vtf << '\n';
    }
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw SimulationError("cannot open for writing: " + path);
    out << content;
    if (!out)
        throw SimulationError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SimulationError("cannot open for reading: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Mode { Normal, Reconfig };

struct VehicleRt {
    int id = 0;
    VehicleState st{0.0, 0.0};
    double realized_u = 0.0;
    Lane lane = Lane::SL;
    bool changing = false;
    Lane lane_from = Lane::SL;
    double change_left = 0.0;
    VLevel level = VLevel::Default;
    int vtf = 0;
    DetectorState det;
    int sigma = 1;  ///< trust of the inbound link from the topology predecessor
    std::optional<AttackSpec> attack;
    ChannelState chan;
    Rng noise{0};
    bool cpp = true;
};

struct GapAccum {
    long count = 0;
    double sum = 0.0, sumsq = 0.0;
    double min = kInf, max = -kInf;

    void add(double g) {
        ++count;
        sum += g;
        sumsq += g * g;
        min = std::min(min, g);
        max = std::max(max, g);
    }

    GapStats finish() const {
        GapStats s;
        s.count = count;
        if (count > 0) {
            s.mean = sum / static_cast<double>(count);
            const double var =
                std::max(0.0, sumsq / static_cast<double>(count) - s.mean * s.mean);
            s.stddev = std::sqrt(var);
            s.min = min;
            s.max = max;
        }
        return s;
    }
};

bool occupies(const VehicleRt& v, Lane lane) {
    return v.lane == lane || (v.changing && v.lane_from == lane);
}

double level_velocity(VLevel level, const PlatoonParams& params,
                      const ActuationLimits& limits, const RearrangeConfig& cfg) {
    switch (level) {
        case VLevel::Slow: return cfg.slow_factor * params.v_des;
        case VLevel::Default: return params.v_des;
        case VLevel::Fast:
            return std::min(cfg.fast_factor * params.v_des, limits.v_max);
    }
    return params.v_des;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, bool collect_trace) {
    config.validate();
    const ControllerGains gains = config.resolve_gains();
    const PlatoonParams& params = config.platoon;
    const ActuationLimits& limits = config.limits;
    const double dt = config.dt;
    const int n = params.n;
    const double brake_at =
        config.leader.emergency_brake_at ? *config.leader.emergency_brake_at : kInf;
    // A follower regulating at exactly d behind a merge candidate would make
    // a threshold of d unreachable, so the default leaves a small margin.
    const double merge_gap = config.rearrange.merge_gap > 0.0
                                 ? config.rearrange.merge_gap
                                 : 0.9 * params.d;

    const Rng root(config.seed);
    std::map<int, VehicleRt> veh;
    for (int i = 1; i <= n; ++i) {
        VehicleRt v;
        v.id = i;
        v.st = VehicleState{static_cast<double>(n - i) * params.d, params.v_des};
        v.chan.rng = root.derive(static_cast<std::uint64_t>(i));
        v.noise = root.derive(10000 + static_cast<std::uint64_t>(i));
        v.vtf = (i == 1) ? 0 : i - 1;
        veh[i] = v;
    }
    for (const LinkAttack& attack : config.attacks)
        veh.at(attack.sender).attack = attack.spec;

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        order[static_cast<std::size_t>(i)] = i + 1;
    TopologyMatrix topo = chain_topology(order);

    Mode mode = Mode::Normal;
    double reconfig_start = 0.0;
    bool reconfig_done_once = false;

    RunResult result;
    result.gains = gains;
    RunMetrics& metrics = result.metrics;
    metrics.min_gap_overall = kInf;
    metrics.min_gap_attack_phase = kInf;
    metrics.min_gap_brake_phase = kInf;
    std::map<int, GapAccum> gap_accum;
    std::map<int, double> min_gap;
    for (int i = 2; i <= n; ++i) {
        min_gap[i] = kInf;
        if (config.detector.enabled)
            metrics.links[i];  // report every monitored link, alarmed or not
    }

    const double hard_stop = config.duration + 1000.0;
    double standstill_for = 0.0;
    double t = 0.0;

    for (long step_idx = 0;; ++step_idx) {
        t = static_cast<double>(step_idx) * dt;
        const bool extend = config.extend_until_standstill && std::isfinite(brake_at);
        if (extend) {
            if (t >= config.duration && standstill_for >= 2.0)
                break;
            if (t >= hard_stop)
                throw SimulationError("run_scenario: platoon never reached standstill");
        } else if (t >= config.duration) {
            break;
        }

        // --- broadcast phase: every vehicle advertises the acceleration it
        // actually realized over the last step, through its (possibly
        // attacked) outbound channel.
        std::map<int, std::optional<CommFrame>> frames;
        for (auto& [id, v] : veh) {
            CommFrame frame;
            frame.sender_id = id;
            frame.u = v.realized_u;
            frame.v = v.st.v;
            frame.p = v.st.p;
            frame.delta = topo.rows.at(id);
            if (v.attack)
                frames[id] = apply_attack(frame, t, *v.attack, v.chan, dt, limits,
                                          config.attack_v_channel);
            else
                frames[id] = frame;
        }

        const std::vector<int> chain = chain_order(topo);
        const int leader_id = chain.front();

        struct StepOut {
            ControlCommand cmd;
            double gap = kNaN, p_tilde = kNaN, v_tilde = kNaN, r = 0.0;
            int vtf = 0;
        };
        std::map<int, StepOut> outs;
        int pending_isolation = 0;

        if (mode == Mode::Normal) {
            for (std::size_t pos = 0; pos < chain.size(); ++pos) {
                const int id = chain[pos];
                VehicleRt& v = veh.at(id);
                StepOut out;

                if (pos == 0) {
                    double v_ref = params.v_des;
                    if (config.leader.kind == LeaderProfile::Kind::Sinusoid)
                        v_ref += config.leader.amplitude *
                                 std::sin(2.0 * std::numbers::pi * t /
                                          config.leader.period);
                    double u = leader_control(v.st.v, v_ref, gains, limits);
                    if (t >= brake_at)
                        u = limits.u_min;
                    out.cmd.u_lin = u;
                    out.cmd.u_total = u;
                    out.cmd.filter_branch = FilterBranch::SwitchedOff;
                    out.cmd.sigma = 1;
                } else {
                    const int pred = chain[pos - 1];
                    const VehicleRt& p = veh.at(pred);
                    const std::optional<CommFrame>& frame = frames.at(pred);
                    const bool dos = !frame.has_value();

                    double v_tilde =
                        dos ? v.st.v - p.st.v : v.st.v - frame->v;
                    if (config.sensor_noise_sd > 0.0)
                        v_tilde += config.sensor_noise_sd * v.noise.gaussian();
                    const double p_tilde = v.st.p - p.st.p + params.d;

                    if (config.detector.enabled && !dos) {
                        const bool was_latched = v.det.latched;
                        out.r = detector_step(v.det, config.detector.config,
                                              v.realized_u, frame->u, v_tilde, dt);
                        if (v.det.latched && !was_latched) {
                            LinkReport& link = metrics.links[id];
                            const bool attacked =
                                p.attack && p.attack->kind != AttackKind::None &&
                                t >= p.attack->active_from;
                            if (attacked) {
                                if (!link.detection_latency)
                                    link.detection_latency =
                                        t - p.attack->active_from;
                            } else {
                                ++link.false_alarms;
                            }
                            if (config.coordinator.enabled &&
                                pending_isolation == 0)
                                pending_isolation = pred;
                        }
                        v.sigma = v.det.sigma;
                    }

                    int sigma_eff = config.detector.enabled ? v.sigma : 1;
                    if (dos || !config.cacc_enabled)
                        sigma_eff = 0;

                    const RelativeState rel{p_tilde, v_tilde};
                    const double u_received = dos ? 0.0 : frame->u;
                    const FeedForwardPolicy policy =
                        config.compensating_ff
                            ? compensating_policy(gains, params, v.st.v)
                            : FeedForwardPolicy(identity_policy);
                    out.cmd = cacc_control(rel, v.st.v, u_received, sigma_eff,
                                           gains, params, limits, policy);
                    out.gap = p.st.p - v.st.p;
                    out.p_tilde = p_tilde;
                    out.v_tilde = v_tilde;
                    out.vtf = pred;
                    v.vtf = pred;
                }
                outs[id] = out;
            }

            if (reconfig_done_once)
                for (const auto& [id, out] : outs)
                    metrics.max_residual_post_reconfig =
                        std::max(metrics.max_residual_post_reconfig, out.r);

            if (pending_isolation != 0) {
                const TopologyMatrix repaired = isolate_compromised(
                    topo, pending_isolation, {}, leader_id);
                if (chain_order(repaired) != chain) {
                    topo = repaired;
                    mode = Mode::Reconfig;
                    reconfig_start = t;
                    for (auto& [id, v] : veh)
                        v.cpp = false;
                }
            }
        } else {
            // --- reconfiguration: the per-vehicle supervisor issues lane,
            // velocity-level and vehicle-to-follow decisions; the
            // feed-forward path and the detectors are paused.
            bool all_cpp = true;
            for (const int id : chain) {
                VehicleRt& v = veh.at(id);
                StepOut out;

                SupervisorInput inp;
                inp.ap = topo.rows.at(id).pred_id;
                inp.lane = v.lane;
                double best_ahead = kInf;
                for (const auto& [oid, other] : veh) {
                    if (oid == id)
                        continue;
                    const double ahead = other.st.p - v.st.p;
                    if (ahead > 0.0 && ahead < best_ahead) {
                        best_ahead = ahead;
                        inp.op = oid;
                    }
                    if (ahead > 0.0 && occupies(other, Lane::FL))
                        inp.fl_ahead.push_back(FlVehicleAhead{oid, ahead});
                }
                if (inp.ap != 0) {
                    const VehicleRt& ap = veh.at(inp.ap);
                    inp.ap_lane = ap.lane;
                    inp.ap_msl = ap.changing && ap.lane == Lane::SL;
                    inp.ap_is_ahead = ap.st.p > v.st.p;
                }
                inp.cleared_vehicles_to_pass = true;
                bool after_self = false;
                for (const int cid : chain_order(topo)) {
                    if (cid == id) {
                        after_self = true;
                        continue;
                    }
                    if (after_self && veh.at(cid).st.p >= v.st.p)
                        inp.cleared_vehicles_to_pass = false;
                }

                bool gap_behind_ok = true;
                double behind = kInf, ahead_sl = kInf;
                for (const auto& [oid, other] : veh) {
                    if (oid == id || !occupies(other, Lane::SL))
                        continue;
                    const double delta = v.st.p - other.st.p;
                    if (delta > 0.0)
                        behind = std::min(behind, delta);
                    else
                        ahead_sl = std::min(ahead_sl, -delta);
                }
                if (behind < merge_gap || ahead_sl <= 0.0)
                    gap_behind_ok = false;

                if (!v.changing) {
                    const LaneCmd cmd = lane_manager(inp, gap_behind_ok);
                    if (cmd == LaneCmd::ToFL && v.lane == Lane::SL) {
                        v.changing = true;
                        v.lane_from = Lane::SL;
                        v.lane = Lane::FL;
                        v.change_left = config.rearrange.lane_change_duration;
                    } else if (cmd == LaneCmd::ToSL && v.lane == Lane::FL) {
                        v.changing = true;
                        v.lane_from = Lane::FL;
                        v.lane = Lane::SL;
                        v.change_left = config.rearrange.lane_change_duration;
                    }
                    inp.lane = v.lane;
                }

                v.level = velocity_manager(inp);
                v.vtf = vtf_manager(inp);
                v.cpp = at_cpp(inp) && !v.changing;
                all_cpp = all_cpp && v.cpp;

                // While straddling both lanes the vehicle cannot pass anyone:
                // it follows the nearest vehicle ahead in either lane it
                // occupies, whatever the supervisor's long-term target is.
                int control_vtf = v.vtf;
                if (v.changing) {
                    control_vtf = 0;
                    double best = kInf;
                    for (const auto& [oid, other] : veh) {
                        if (oid == id)
                            continue;
                        if (!occupies(other, v.lane) &&
                            !occupies(other, v.lane_from))
                            continue;
                        const double ahead = other.st.p - v.st.p;
                        if (ahead > 0.0 && ahead < best) {
                            best = ahead;
                            control_vtf = oid;
                        }
                    }
                }

                const double target_v =
                    level_velocity(v.level, params, limits, config.rearrange);
                double u = 0.0;
                if (control_vtf != 0) {
                    PlatoonParams lvl = params;
                    lvl.v_des = target_v;
                    const RelativeState rel =
                        relative_state(veh.at(control_vtf).st, v.st, params.d);
                    u = acc_control(rel, v.st.v, gains, lvl);
                    out.gap = veh.at(control_vtf).st.p - v.st.p;
                    out.p_tilde = rel.p_tilde;
                    out.v_tilde = rel.v_tilde;
                } else {
                    u = -gains.k * gains.h * (v.st.v - target_v);
                }
                out.cmd.u_lin = u;
                out.cmd.u_total = saturate(u, limits);
                out.cmd.filter_branch = FilterBranch::SwitchedOff;
                out.cmd.sigma = 0;
                out.vtf = control_vtf;
                outs[id] = out;
            }

            if (all_cpp) {
                mode = Mode::Normal;
                reconfig_done_once = true;
                metrics.reconfig_completion_time = t - reconfig_start;
                const std::vector<int> new_chain = chain_order(topo);
                for (std::size_t pos = 0; pos < new_chain.size(); ++pos) {
                    VehicleRt& v = veh.at(new_chain[pos]);
                    v.level = VLevel::Default;
                    v.sigma = 1;
                    if (pos == 0) {
                        v.vtf = 0;
                        reset_detector(v.det, 0.0);
                    } else {
                        const VehicleRt& p = veh.at(new_chain[pos - 1]);
                        v.vtf = p.id;
                        reset_detector(v.det, v.st.v - p.st.v);
                    }
                }
            }
        }

        // --- lane-change progress
        for (auto& [id, v] : veh) {
            if (v.changing) {
                v.change_left -= dt;
                if (v.change_left <= 0.0) {
                    v.changing = false;
                    v.change_left = 0.0;
                }
            }
        }

        // --- collision and gap bookkeeping on the pre-step states
        for (const Lane lane : {Lane::SL, Lane::FL}) {
            std::vector<const VehicleRt*> in_lane;
            for (const auto& [id, v] : veh)
                if (occupies(v, lane))
                    in_lane.push_back(&v);
            std::sort(in_lane.begin(), in_lane.end(),
                      [](const VehicleRt* a, const VehicleRt* b) {
                          return a->st.p > b->st.p;
                      });
            for (std::size_t i = 1; i < in_lane.size(); ++i) {
                const double gap = in_lane[i - 1]->st.p - in_lane[i]->st.p;
                const int rear = in_lane[i]->id;
                auto it = min_gap.find(rear);
                if (it == min_gap.end())
                    it = min_gap.emplace(rear, kInf).first;
                it->second = std::min(it->second, gap);
                metrics.min_gap_overall = std::min(metrics.min_gap_overall, gap);
                if (t < brake_at)
                    metrics.min_gap_attack_phase =
                        std::min(metrics.min_gap_attack_phase, gap);
                else
                    metrics.min_gap_brake_phase =
                        std::min(metrics.min_gap_brake_phase, gap);
                if (gap < 0.0 && !metrics.collision) {
                    metrics.collision = true;
                    metrics.collision_time = t;
                }
            }
        }
        for (const auto& [id, out] : outs)
            if (t >= config.stats_from && std::isfinite(out.gap))
                gap_accum[id].add(out.gap);

        if (collect_trace) {
            for (const int id : chain_order(topo)) {
                const VehicleRt& v = veh.at(id);
                const StepOut& out = outs.at(id);
                TraceRow row;
                row.t = t;
                row.vehicle_id = id;
                row.p = v.st.p;
                row.v = v.st.v;
                row.u_lin = out.cmd.u_lin;
                row.u_ff_raw = out.cmd.u_ff_raw;
                row.u_ff = out.cmd.u_ff;
                row.u_total = out.cmd.u_total;
                row.filter_branch = out.cmd.filter_branch;
                row.gap = out.gap;
                row.p_tilde = out.p_tilde;
                row.v_tilde = out.v_tilde;
                row.sigma = out.cmd.sigma;
                row.r = out.r;
                row.lane = v.lane;
                row.v_level = v.level;
                row.vtf = out.vtf;
                result.trace.push_back(row);
            }
        }

        // --- synchronous dynamics update
        bool all_standing = true;
        for (auto& [id, v] : veh) {
            const double v_before = v.st.v;
            v.st = platoon::step(v.st, outs.at(id).cmd.u_total, dt, limits);
            v.realized_u = (v.st.v - v_before) / dt;
            // Followers creep asymptotically toward the standstill spacing,
            // so "standing" uses a small velocity threshold.
            all_standing = all_standing && v.st.v < 1e-2;
        }
        standstill_for = all_standing ? standstill_for + dt : 0.0;
    }

    metrics.simulated_time = t;
    metrics.min_gap = std::move(min_gap);
    for (const auto& [id, accum] : gap_accum)
        metrics.gap_stats[id] = accum.finish();
    metrics.all_at_cpp = mode == Mode::Normal;
    for (const auto& [id, v] : veh)
        metrics.all_at_cpp =
            metrics.all_at_cpp && v.lane == Lane::SL && !v.changing;
    return result;
}

std::string metrics_to_csv(const RunMetrics& metrics) {
    std::ostringstream out;
    out << "metric,vehicle,value\n";
    out << "collision,," << (metrics.collision ? 1 : 0) << '\n';
    if (metrics.collision_time)
        out << "collision_time,," << csv::format(*metrics.collision_time) << '\n';
    out << "min_gap_overall,," << csv::format(metrics.min_gap_overall) << '\n';
    out << "min_gap_attack_phase,,"
        << csv::format(metrics.min_gap_attack_phase) << '\n';
    out << "min_gap_brake_phase,,"
        << csv::format(metrics.min_gap_brake_phase) << '\n';
    out << "simulated_time,," << csv::format(metrics.simulated_time) << '\n';
    if (metrics.reconfig_completion_time)
        out << "reconfig_completion_time,,"
            << csv::format(*metrics.reconfig_completion_time) << '\n';
    for (const auto& [id, gap] : metrics.min_gap)
        out << "min_gap," << id << ',' << csv::format(gap) << '\n';
    for (const auto& [id, stats] : metrics.gap_stats) {
        out << "gap_mean," << id << ',' << csv::format(stats.mean) << '\n';
        out << "gap_std," << id << ',' << csv::format(stats.stddev) << '\n';
        out << "gap_min," << id << ',' << csv::format(stats.min) << '\n';
        out << "gap_max," << id << ',' << csv::format(stats.max) << '\n';
    }
    for (const auto& [id, link] : metrics.links) {
        if (link.detection_latency)
            out << "detection_latency," << id << ','
                << csv::format(*link.detection_latency) << '\n';
        out << "false_alarms," << id << ',' << link.false_alarms << '\n';
    }
    return out.str();
}

}  // namespace platoon
