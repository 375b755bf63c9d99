#include "platoon/campaign.hpp"
#include "platoon/coordinator.hpp"
#include "platoon/csv.hpp"
#include "platoon/replay.hpp"
#include "platoon/simulation.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

using namespace platoon;

int cmd_tune(double d, double v_des, double u_min, double u_max, double v_max,
             double h_resolution, double alpha, const std::string& region_csv) {
    const ActuationLimits limits{u_min, u_max, v_max};
    TuneOptions options;
    options.h_resolution = h_resolution;
    options.alpha = alpha;
    const ControllerGains gains = tune_gains(d, v_des, limits, options);
    std::cout << "k=" << csv::format(gains.k) << " h=" << csv::format(gains.h)
              << " c=" << csv::format(gains.c)
              << " alpha=" << csv::format(gains.alpha) << '\n';

    if (!region_csv.empty()) {
        std::vector<double> d_grid, h_grid;
        for (double dv = d / 10.0; dv <= 2.0 * d + 1e-12; dv += d / 10.0)
            d_grid.push_back(dv);
        const double h_hi = 2.0 * d / v_des;
        for (double hv = h_hi / 100.0; hv <= h_hi + 1e-12; hv += h_hi / 100.0)
            h_grid.push_back(hv);
        export_region_csv(feasible_region(d_grid, h_grid, v_des, limits),
                          region_csv);
        std::cout << "feasible region written to " << region_csv << '\n';
    }
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& trace_path,
            const std::string& metrics_path) {
    const ScenarioConfig config = load_scenario(config_path);
    const RunResult result = run_scenario(config, !trace_path.empty());
    if (!trace_path.empty())
        write_file(trace_path, trace_to_csv(result.trace));
    const std::string metrics = metrics_to_csv(result.metrics);
    if (!metrics_path.empty())
        write_file(metrics_path, metrics);
    std::cout << metrics;
    return 0;
}

int cmd_campaign(const std::string& config_path, int runs,
                 const std::string& kinds_arg, int workers,
                 const std::string& out_path) {
    const ScenarioConfig base = load_scenario(config_path);
    CampaignOptions options;
    options.runs = runs;
    options.workers = workers;
    if (!kinds_arg.empty()) {
        options.kinds.clear();
        std::istringstream in(kinds_arg);
        std::string name;
        while (std::getline(in, name, ','))
            options.kinds.push_back(attack_kind_from_string(name));
    }
    const CampaignResult result = run_campaign(base, options);
    if (!out_path.empty())
        write_file(out_path, campaign_to_csv(result));
    std::cout << campaign_to_table(result);
    return 0;
}

int cmd_replay(const std::string& trace_path, double K, double r_bar,
               double persistence, const std::string& overlay_kind,
               double amplitude, double freq, double phase, double sd,
               std::uint64_t seed, int sender, const std::string& out_path) {
    DetectorConfig config;
    config.K = K;
    config.r_bar = r_bar;
    config.persistence = persistence;
    ReplayOverlay overlay;
    if (overlay_kind == "sinusoid")
        overlay.kind = ReplayOverlay::Kind::Sinusoid;
    else if (overlay_kind == "gaussian")
        overlay.kind = ReplayOverlay::Kind::Gaussian;
    else if (!overlay_kind.empty() && overlay_kind != "none")
        throw ConfigError("replay: overlay must be none, sinusoid, or gaussian");
    overlay.amplitude = amplitude;
    overlay.freq = freq;
    overlay.phase = phase;
    overlay.sd = sd;
    overlay.seed = seed;
    overlay.sender = sender;
    const ReplayResult result =
        replay_detector(read_file(trace_path), config, overlay);
    if (!out_path.empty())
        write_file(out_path, replay_to_csv(result));
    std::cout << "alarms=" << result.alarms << '\n';
    return 0;
}

int cmd_coord(const std::string& topology_path,
              const std::vector<std::string>& forbidden_args, int isolate,
              int merge, int split, int preferred_leader) {
    TopologyMatrix D = topology_from_text(read_file(topology_path));
    ForbiddenLinks forbidden;
    for (const std::string& arg : forbidden_args) {
        std::istringstream in(arg);
        int from = 0, to = 0;
        char sep = 0;
        if (!(in >> from >> sep >> to) || sep != ':')
            throw ConfigError("coord: forbidden link must be 'from:to'");
        forbidden.insert({from, to});
    }
    if (preferred_leader == 0) {
        for (const auto& [id, row] : D.rows)
            if (row.pred_id == 0)
                preferred_leader = id;
    }
    TopologyMatrix result;
    if (isolate != 0)
        result = isolate_compromised(D, isolate, forbidden, preferred_leader);
    else if (merge != 0)
        result = handle_merge(D, merge, preferred_leader);
    else if (split != 0)
        result = handle_split(D, split, preferred_leader);
    else
        result = tie_break(solve_topology(D, forbidden), preferred_leader);
    std::cout << to_text(result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Attack-resilient platooning simulator"};
    app.require_subcommand(1);

    // tune
    auto* tune = app.add_subcommand("tune", "Synthesize controller gains");
    double d = 1.0, v_des = 1.0, u_min = -1.0, u_max = 1.0, v_max = 2.0;
    double h_resolution = 1e-2, alpha = 1.0;
    std::string region_csv;
    tune->add_option("--d", d, "desired spacing [m]")->required();
    tune->add_option("--v-des", v_des, "desired velocity [m/s]")->required();
    tune->add_option("--u-min", u_min, "max braking [m/s^2]")->required();
    tune->add_option("--u-max", u_max, "max acceleration [m/s^2]")->required();
    tune->add_option("--v-max", v_max, "max velocity [m/s]")->required();
    tune->add_option("--h-resolution", h_resolution, "h search grid step [s]");
    tune->add_option("--alpha", alpha, "feed-forward authority fraction");
    tune->add_option("--region-csv", region_csv,
                     "also export the (d, h) feasibility grid to this file");

    // run
    auto* run = app.add_subcommand("run", "Run one scenario");
    std::string run_config, trace_path, metrics_path;
    run->add_option("--config", run_config, "scenario JSON file")->required();
    run->add_option("--trace", trace_path, "write the trace CSV here");
    run->add_option("--metrics", metrics_path, "write the metrics CSV here");

    // campaign
    auto* campaign = app.add_subcommand("campaign", "Run a statistical campaign");
    std::string campaign_config, kinds_arg, campaign_out;
    int runs = 100, workers = 0;
    campaign->add_option("--config", campaign_config, "base scenario JSON file")
        ->required();
    campaign->add_option("--runs", runs, "runs per attack kind");
    campaign->add_option("--kinds", kinds_arg,
                         "comma-separated attack kinds (default: constant,"
                         "sinusoid,filtered-noise)");
    campaign->add_option("--workers", workers, "worker threads (0 = auto)");
    campaign->add_option("--out", campaign_out, "write the aggregate CSV here");

    // replay
    auto* replay = app.add_subcommand("replay", "Replay a trace through the detector");
    std::string replay_trace, overlay_kind = "none", replay_out;
    double K = 0.05, r_bar = 0.75, persistence = 0.5;
    double amplitude = 0.0, freq = 0.0, phase = 0.0, sd = 0.0;
    std::uint64_t overlay_seed = 0;
    int sender = 1;
    replay->add_option("--trace", replay_trace, "trace CSV file")->required();
    replay->add_option("--K", K, "detector gain");
    replay->add_option("--r-bar", r_bar, "residual threshold [m/s]");
    replay->add_option("--persistence", persistence, "required exceedance [s]");
    replay->add_option("--overlay", overlay_kind, "none | sinusoid | gaussian");
    replay->add_option("--amplitude", amplitude, "sinusoid amplitude [m/s^2]");
    replay->add_option("--freq", freq, "sinusoid frequency [Hz]");
    replay->add_option("--phase", phase, "sinusoid phase [rad]");
    replay->add_option("--sd", sd, "gaussian noise sd [m/s]");
    replay->add_option("--seed", overlay_seed, "gaussian noise seed");
    replay->add_option("--sender", sender, "sender substituted by the sinusoid");
    replay->add_option("--out", replay_out, "write residuals CSV here");

    // coord
    auto* coord = app.add_subcommand("coord", "Solve a topology file");
    std::string topology_path;
    std::vector<std::string> forbidden_args;
    int isolate = 0, merge = 0, split = 0, preferred_leader = 0;
    coord->add_option("--topology", topology_path,
                      "text file, one 'id pred succ' line per vehicle")
        ->required();
    coord->add_option("--forbidden", forbidden_args,
                      "forbidden predecessor->follower edge as 'from:to'");
    coord->add_option("--isolate", isolate, "move this compromised vehicle to the tail");
    coord->add_option("--merge", merge, "add this vehicle");
    coord->add_option("--split", split, "remove this vehicle");
    coord->add_option("--preferred-leader", preferred_leader,
                      "leader to preserve (default: current leader)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tune->parsed())
            return cmd_tune(d, v_des, u_min, u_max, v_max, h_resolution, alpha,
                            region_csv);
        if (run->parsed())
            return cmd_run(run_config, trace_path, metrics_path);
        if (campaign->parsed())
            return cmd_campaign(campaign_config, runs, kinds_arg, workers,
                                campaign_out);
        if (replay->parsed())
            return cmd_replay(replay_trace, K, r_bar, persistence, overlay_kind,
                              amplitude, freq, phase, sd, overlay_seed, sender,
                              replay_out);
        if (coord->parsed())
            return cmd_coord(topology_path, forbidden_args, isolate, merge,
                             split, preferred_leader);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const InfeasibleHeadwayError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const NoFeasibleHeadwayError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
