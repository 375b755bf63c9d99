#include "platoon/campaign.hpp"

#include "platoon/csv.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

namespace platoon {

namespace {

std::uint64_t kind_key(AttackKind kind) {
    return 1000000ULL * (static_cast<std::uint64_t>(kind) + 1ULL);
}

}  // namespace

ScenarioConfig campaign_run_config(const ScenarioConfig& base, AttackKind kind,
                                   int run_index, const RandomizeRanges& ranges) {
    ScenarioConfig config = base;
    config.attacks.clear();
    config.leader.emergency_brake_at = base.duration;
    config.extend_until_standstill = true;

    // Streams are derived hierarchically from the base seed so that results
    // do not depend on execution order across workers.
    const Rng run_rng = Rng(base.seed).derive(
        kind_key(kind) + static_cast<std::uint64_t>(run_index));
    config.seed = Rng(run_rng).next_u64();
    for (int sender = 1; sender < base.platoon.n; ++sender) {
        Rng stream = run_rng.derive(static_cast<std::uint64_t>(sender));
        LinkAttack attack;
        attack.sender = sender;
        attack.spec = randomize_attack_params(kind, base.limits, stream, ranges);
        attack.spec.active_from = 0.0;
        attack.spec.active_to = 1e18;
        config.attacks.push_back(attack);
    }
    return config;
}

CampaignResult run_campaign(const ScenarioConfig& base,
                            const CampaignOptions& options) {
    base.validate();
    if (options.runs < 1)
        throw ConfigError("campaign: runs must be >= 1");
    if (options.kinds.empty())
        throw ConfigError("campaign: at least one attack kind required");

    struct RunOutcome {
        bool ok = false;
        bool collision = false;
        double min_gap = 0.0;
        double min_gap_attack = 0.0;
        double min_gap_brake = 0.0;
    };

    struct Task {
        AttackKind kind;
        int run_index;
    };
    std::vector<Task> tasks;
    for (const AttackKind kind : options.kinds)
        for (int run = 0; run < options.runs; ++run)
            tasks.push_back(Task{kind, run});

    std::vector<RunOutcome> outcomes(tasks.size());
    std::atomic<std::size_t> next{0};
    const unsigned workers = options.workers > 0
                                 ? static_cast<unsigned>(options.workers)
                                 : std::max(1u, std::thread::hardware_concurrency());

    const auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= tasks.size())
                return;
            const Task& task = tasks[index];
            RunOutcome& outcome = outcomes[index];
            try {
                const ScenarioConfig config = campaign_run_config(
                    base, task.kind, task.run_index, options.ranges);
                const RunResult run = run_scenario(config, /*collect_trace=*/false);
                outcome.ok = true;
                outcome.collision = run.metrics.collision;
                outcome.min_gap = run.metrics.min_gap_overall;
                outcome.min_gap_attack = run.metrics.min_gap_attack_phase;
                outcome.min_gap_brake = run.metrics.min_gap_brake_phase;
            } catch (const std::exception&) {
                outcome.ok = false;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i)
        pool.emplace_back(worker);
    worker();
    for (std::thread& thread : pool)
        thread.join();

    // Aggregation iterates tasks in their fixed construction order, so the
    // result is independent of which worker ran which task.
    CampaignResult result;
    std::size_t index = 0;
    for (const AttackKind kind : options.kinds) {
        KindAggregate agg;
        agg.kind = kind;
        agg.runs = options.runs;
        agg.min_gap = 1e300;
        agg.min_gap_attack = 1e300;
        agg.min_gap_brake = 1e300;
        std::vector<double> per_run_min;
        for (int run = 0; run < options.runs; ++run, ++index) {
            const RunOutcome& outcome = outcomes[index];
            if (!outcome.ok) {
                ++agg.errors;
                continue;
            }
            if (outcome.collision)
                ++agg.collisions;
            agg.min_gap = std::min(agg.min_gap, outcome.min_gap);
            agg.min_gap_attack = std::min(agg.min_gap_attack, outcome.min_gap_attack);
            agg.min_gap_brake = std::min(agg.min_gap_brake, outcome.min_gap_brake);
            per_run_min.push_back(outcome.min_gap);
        }
        if (!per_run_min.empty()) {
            double sum = 0.0;
            for (const double g : per_run_min)
                sum += g;
            agg.mean_min_gap = sum / static_cast<double>(per_run_min.size());
            std::sort(per_run_min.begin(), per_run_min.end());
            const std::size_t rank = static_cast<std::size_t>(
                0.05 * static_cast<double>(per_run_min.size() - 1));
            agg.p05_min_gap = per_run_min[rank];
        }
        result.rows.push_back(agg);
    }
    return result;
}

std::string campaign_to_csv(const CampaignResult& result) {
    std::ostringstream out;
    out << "kind,runs,errors,collisions,collision_rate,min_gap,min_gap_attack,"
           "min_gap_brake,mean_min_gap,p05_min_gap\n";
    for (const KindAggregate& row : result.rows) {
        const double rate =
            row.runs > 0 ? static_cast<double>(row.collisions) / row.runs : 0.0;
        out << to_string(row.kind) << ',' << row.runs << ',' << row.errors << ','
            << row.collisions << ',' << csv::format(rate) << ','
            << csv::format(row.min_gap) << ',' << csv::format(row.min_gap_attack)
            << ',' << csv::format(row.min_gap_brake) << ','
            << csv::format(row.mean_min_gap) << ','
            << csv::format(row.p05_min_gap) << '\n';
    }
    return out.str();
}

std::string campaign_to_table(const CampaignResult& result) {
    std::ostringstream out;
    out << std::left << std::setw(16) << "kind" << std::right << std::setw(6)
        << "runs" << std::setw(8) << "errors" << std::setw(12) << "collisions"
        << std::setw(12) << "min gap" << std::setw(14) << "min (attack)"
        << std::setw(13) << "min (brake)" << std::setw(14) << "mean min gap"
        << '\n';
    out << std::string(95, '-') << '\n';
    out << std::fixed << std::setprecision(4);
    for (const KindAggregate& row : result.rows) {
        out << std::left << std::setw(16) << to_string(row.kind) << std::right
            << std::setw(6) << row.runs << std::setw(8) << row.errors
            << std::setw(12) << row.collisions << std::setw(12) << row.min_gap
            << std::setw(14) << row.min_gap_attack << std::setw(13)
            << row.min_gap_brake << std::setw(14) << row.mean_min_gap << '\n';
    }
    return out.str();
}

}  // namespace platoon
