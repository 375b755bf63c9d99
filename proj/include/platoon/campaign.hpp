#ifndef PLATOON_CAMPAIGN_HPP
#define PLATOON_CAMPAIGN_HPP

#include "platoon/simulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace platoon {

struct CampaignOptions {
    int runs = 100;
    std::vector<AttackKind> kinds = {AttackKind::ReplaceConstant,
                                     AttackKind::ReplaceSinusoid,
                                     AttackKind::ReplaceFilteredNoise};
    int workers = 0;  ///< 0 = hardware concurrency
    RandomizeRanges ranges;
};

/// Aggregate over all runs of one attack kind.
struct KindAggregate {
    AttackKind kind = AttackKind::None;
    int runs = 0;
    int collisions = 0;
    int errors = 0;
    double min_gap = 0.0;           ///< worst gap across all runs [m]
    double min_gap_attack = 0.0;    ///< worst gap before the emergency brake
    double min_gap_brake = 0.0;     ///< worst gap from the brake on
    double mean_min_gap = 0.0;      ///< mean over runs of the per-run min gap
    double p05_min_gap = 0.0;       ///< 5th percentile of per-run min gaps
};

struct CampaignResult {
    std::vector<KindAggregate> rows;
};

/// Runs `runs` randomized simulations per attack kind: every inter-vehicle
/// link carries an independently randomized attack of that kind, active for
/// the whole run; the leader performs an emergency brake at t = duration and
/// the run extends until the platoon stands still. Deterministic for a given
/// base seed regardless of the worker count.
CampaignResult run_campaign(const ScenarioConfig& base,
                            const CampaignOptions& options);

/// Derives the per-run scenario (seed and attacks) exactly as run_campaign
/// does; run_campaign with runs = 1 equals run_scenario on this config.
ScenarioConfig campaign_run_config(const ScenarioConfig& base, AttackKind kind,
                                   int run_index, const RandomizeRanges& ranges);

std::string campaign_to_csv(const CampaignResult& result);
std::string campaign_to_table(const CampaignResult& result);

}  // namespace platoon

#endif
