#ifndef PLATOON_COORDINATOR_HPP
#define PLATOON_COORDINATOR_HPP

#include "platoon/types.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace platoon {

/// Per-vehicle topology row: ids of the preceding and following vehicle,
/// 0 meaning "none".
struct DeltaVec {
    int pred_id = 0;
    int succ_id = 0;

    friend bool operator==(const DeltaVec&, const DeltaVec&) = default;
};

/// Stacked delta rows keyed by vehicle id. A valid matrix describes a single
/// predecessor-follower chain.
struct TopologyMatrix {
    std::map<int, DeltaVec> rows;

    friend bool operator==(const TopologyMatrix&, const TopologyMatrix&) = default;
};

/// Ordered (predecessor -> follower) edges that must not appear in solutions,
/// e.g. a severed unreliable link.
using ForbiddenLinks = std::set<std::pair<int, int>>;

struct ValidityReport {
    bool valid = false;
    std::vector<std::string> violations;
};

/// Checks the correct platooning conditions: exactly one leader, exactly one
/// tail, connected single chain, and pred/succ consistency.
/// Throws ConfigError if a row references an unknown vehicle id.
ValidityReport check_conditions(const TopologyMatrix& D);

/// Builds the matrix for a chain given front-to-back vehicle ids.
TopologyMatrix chain_topology(const std::vector<int>& order);

/// Front-to-back order of a valid chain.
std::vector<int> chain_order(const TopologyMatrix& D);

/// Enumerates every linear ordering of the vehicle set without forbidden
/// edges and returns all maximizers of the row-agreement score
///   sum_i [pred_i == pred*_i] + [succ_i == succ*_i].
/// Throws SimulationError if the forbidden set admits no ordering.
std::vector<TopologyMatrix> solve_topology(const TopologyMatrix& D,
                                           const ForbiddenLinks& forbidden = {});

/// Agreement score of a candidate against the (possibly violated) matrix D.
int topology_score(const TopologyMatrix& D, const TopologyMatrix& candidate);

/// Deterministic selection among optima: prefer solutions keeping
/// preferred_leader at the head, then the lexicographically smallest
/// front-to-back ordering.
TopologyMatrix tie_break(const std::vector<TopologyMatrix>& optima,
                         int preferred_leader);

/// Repairs a matrix where the follower of compromised_id has already set its
/// pred to 0. Adds the severed edge to forbidden, solves, tie-breaks, and
/// asserts the compromised vehicle ends at the tail.
TopologyMatrix isolate_compromised(const TopologyMatrix& D, int compromised_id,
                                   ForbiddenLinks forbidden, int preferred_leader);

/// Merge request: adds a [0, 0] row for new_id, then solve + tie-break.
TopologyMatrix handle_merge(const TopologyMatrix& D, int new_id,
                            int preferred_leader);

/// Split request: removes leaving_id's row and its references, then
/// solve + tie-break.
TopologyMatrix handle_split(const TopologyMatrix& D, int leaving_id,
                            int preferred_leader);

/// Outcome of majority-based false-broadcast identification.
struct BroadcastCheck {
    enum class Outcome { Consistent, SuspectIdentified, NotIdentifiable };
    Outcome outcome = Outcome::Consistent;
    int suspect = 0;
};

/// Cross-checks each vehicle's claimed own row against the rows asserted by
/// the others. A claimer contradicted by at least two neighbours is the
/// suspect (requires N > 3 to be meaningful). An emulated no-predecessor
/// claim produces a single contradiction and is reported NotIdentifiable.
/// Throws SimulationError when more than one claimer qualifies.
BroadcastCheck detect_false_broadcast(const std::map<int, TopologyMatrix>& claims);

/// Plain-text serialization: one line per vehicle "id pred_id succ_id".
std::string to_text(const TopologyMatrix& D);
TopologyMatrix topology_from_text(const std::string& text);

}  // namespace platoon

#endif
