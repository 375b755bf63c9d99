#include "platoon/coordinator.hpp"

#include <algorithm>
#include <sstream>

namespace platoon {

namespace {

void require_known_ids(const TopologyMatrix& D) {
    for (const auto& [id, delta] : D.rows) {
        if (id <= 0)
            throw ConfigError("malformed topology matrix: vehicle ids must be positive");
        for (int ref : {delta.pred_id, delta.succ_id}) {
            if (ref != 0 && !D.rows.contains(ref)) {
                std::ostringstream msg;
                msg << "malformed topology matrix: row " << id
                    << " references unknown vehicle " << ref;
                throw ConfigError(msg.str());
            }
        }
    }
}

}  // namespace

ValidityReport check_conditions(const TopologyMatrix& D) {
    require_known_ids(D);
    ValidityReport report;
    if (D.rows.empty()) {
        report.violations.push_back("empty matrix");
        return report;
    }

    std::vector<int> leaders;
    std::vector<int> tails;
    for (const auto& [id, delta] : D.rows) {
        if (delta.pred_id == 0) leaders.push_back(id);
        if (delta.succ_id == 0) tails.push_back(id);
    }
    if (leaders.size() != 1) {
        std::ostringstream msg;
        msg << leaders.size() << " vehicles without a predecessor (expected 1)";
        report.violations.push_back(msg.str());
    }
    if (tails.size() != 1) {
        std::ostringstream msg;
        msg << tails.size() << " vehicles without a follower (expected 1)";
        report.violations.push_back(msg.str());
    }

    for (const auto& [id, delta] : D.rows) {
        if (delta.succ_id != 0 && D.rows.at(delta.succ_id).pred_id != id) {
            std::ostringstream msg;
            msg << "inconsistent: " << id << " lists follower " << delta.succ_id
                << " but " << delta.succ_id << " lists predecessor "
                << D.rows.at(delta.succ_id).pred_id;
            report.violations.push_back(msg.str());
        }
        if (delta.pred_id != 0 && D.rows.at(delta.pred_id).succ_id != id) {
            std::ostringstream msg;
            msg << "inconsistent: " << id << " lists predecessor " << delta.pred_id
                << " but " << delta.pred_id << " lists follower "
                << D.rows.at(delta.pred_id).succ_id;
            report.violations.push_back(msg.str());
        }
    }

    // Connectivity: walk the chain from the leader and require full coverage.
    if (report.violations.empty()) {
        std::size_t visited = 0;
        int current = leaders.front();
        std::set<int> seen;
        while (current != 0 && seen.insert(current).second) {
            ++visited;
            current = D.rows.at(current).succ_id;
        }
        if (visited != D.rows.size())
            report.violations.push_back("topology is not a single connected chain");
    }

    report.valid = report.violations.empty();
    return report;
}

TopologyMatrix chain_topology(const std::vector<int>& order) {
    TopologyMatrix D;
    for (std::size_t i = 0; i < order.size(); ++i) {
        DeltaVec delta;
        delta.pred_id = (i == 0) ? 0 : order[i - 1];
        delta.succ_id = (i + 1 == order.size()) ? 0 : order[i + 1];
        D.rows[order[i]] = delta;
    }
    return D;
}

std::vector<int> chain_order(const TopologyMatrix& D) {
    const auto report = check_conditions(D);
    if (!report.valid)
        throw SimulationError("chain_order requires a valid topology: " +
                              report.violations.front());
    std::vector<int> order;
    int current = 0;
    for (const auto& [id, delta] : D.rows)
        if (delta.pred_id == 0) current = id;
    while (current != 0) {
        order.push_back(current);
        current = D.rows.at(current).succ_id;
    }
    return order;
}

int topology_score(const TopologyMatrix& D, const TopologyMatrix& candidate) {
    int score = 0;
    for (const auto& [id, delta] : D.rows) {
        const auto it = candidate.rows.find(id);
        if (it == candidate.rows.end())
            continue;
        score += (delta.pred_id == it->second.pred_id) ? 1 : 0;
        score += (delta.succ_id == it->second.succ_id) ? 1 : 0;
    }
    return score;
}

std::vector<TopologyMatrix> solve_topology(const TopologyMatrix& D,
                                           const ForbiddenLinks& forbidden) {
    require_known_ids(D);
    if (D.rows.empty())
        throw ConfigError("solve_topology: empty matrix");

    std::vector<int> ids;
    ids.reserve(D.rows.size());
    for (const auto& [id, delta] : D.rows)
        ids.push_back(id);
    std::sort(ids.begin(), ids.end());

    std::vector<TopologyMatrix> optima;
    int best = -1;
    do {
        bool admissible = true;
        for (std::size_t i = 0; i + 1 < ids.size(); ++i)
            if (forbidden.contains({ids[i], ids[i + 1]})) {
                admissible = false;
                break;
            }
        if (!admissible)
            continue;
        TopologyMatrix candidate = chain_topology(ids);
        const int score = topology_score(D, candidate);
        if (score > best) {
            best = score;
            optima.clear();
        }
        if (score == best)
            optima.push_back(std::move(candidate));
    } while (std::next_permutation(ids.begin(), ids.end()));

    if (optima.empty())
        throw SimulationError("solve_topology: forbidden links admit no ordering");
    return optima;
}

TopologyMatrix tie_break(const std::vector<TopologyMatrix>& optima,
                         int preferred_leader) {
    if (optima.empty())
        throw SimulationError("tie_break: empty optimum set");

    std::vector<std::pair<std::vector<int>, const TopologyMatrix*>> candidates;
    for (const auto& D : optima)
        candidates.emplace_back(chain_order(D), &D);

    const bool leader_preserved =
        std::any_of(candidates.begin(), candidates.end(), [&](const auto& c) {
            return c.first.front() == preferred_leader;
        });

    const TopologyMatrix* best = nullptr;
    const std::vector<int>* best_order = nullptr;
    for (const auto& [order, D] : candidates) {
        if (leader_preserved && order.front() != preferred_leader)
            continue;
        if (best_order == nullptr || order < *best_order) {
            best_order = &order;
            best = D;
        }
    }
    return *best;
}

TopologyMatrix isolate_compromised(const TopologyMatrix& D, int compromised_id,
                                   ForbiddenLinks forbidden, int preferred_leader) {
    if (!D.rows.contains(compromised_id))
        throw ConfigError("isolate_compromised: unknown vehicle id");
    // The compromised vehicle still lists its old follower; that severed
    // edge must never be re-inserted.
    const int old_follower = D.rows.at(compromised_id).succ_id;
    if (old_follower != 0)
        forbidden.insert({compromised_id, old_follower});
    const TopologyMatrix result =
        tie_break(solve_topology(D, forbidden), preferred_leader);
    if (result.rows.at(compromised_id).succ_id != 0)
        throw SimulationError(
            "isolate_compromised: compromised vehicle did not end at the tail");
    return result;
}

TopologyMatrix handle_merge(const TopologyMatrix& D, int new_id,
                            int preferred_leader) {
    if (D.rows.contains(new_id))
        throw ConfigError("handle_merge: vehicle id already in platoon");
    if (new_id <= 0)
        throw ConfigError("handle_merge: vehicle ids must be positive");
    TopologyMatrix extended = D;
    extended.rows[new_id] = DeltaVec{0, 0};
    return tie_break(solve_topology(extended), preferred_leader);
}

TopologyMatrix handle_split(const TopologyMatrix& D, int leaving_id,
                            int preferred_leader) {
    if (!D.rows.contains(leaving_id))
        throw ConfigError("handle_split: unknown vehicle id");
    TopologyMatrix reduced;
    for (const auto& [id, delta] : D.rows) {
        if (id == leaving_id)
            continue;
        DeltaVec row = delta;
        if (row.pred_id == leaving_id) row.pred_id = 0;
        if (row.succ_id == leaving_id) row.succ_id = 0;
        reduced.rows[id] = row;
    }
    if (reduced.rows.empty())
        throw ConfigError("handle_split: platoon would be empty");
    return tie_break(solve_topology(reduced), preferred_leader);
}

BroadcastCheck detect_false_broadcast(const std::map<int, TopologyMatrix>& claims) {
    // Each vehicle's authoritative statement is its own row in the matrix it
    // broadcasts; the cross-checks compare those statements pairwise.
    std::map<int, DeltaVec> own_rows;
    for (const auto& [claimer, D] : claims) {
        const auto it = D.rows.find(claimer);
        if (it == D.rows.end())
            throw ConfigError("detect_false_broadcast: claim lacks the claimer's own row");
        own_rows[claimer] = it->second;
    }

    std::map<int, std::set<int>> contradicted_by;
    bool any_inconsistency = false;
    for (const auto& [a, row_a] : own_rows) {
        for (const auto& [b, row_b] : own_rows) {
            if (a >= b)
                continue;
            const bool a_precedes_b = row_a.succ_id == b;
            const bool b_follows_a = row_b.pred_id == a;
            const bool a_follows_b = row_a.pred_id == b;
            const bool b_precedes_a = row_b.succ_id == a;
            if (a_precedes_b != b_follows_a || a_follows_b != b_precedes_a) {
                any_inconsistency = true;
                contradicted_by[a].insert(b);
                contradicted_by[b].insert(a);
            }
        }
    }

    BroadcastCheck result;
    if (!any_inconsistency)
        return result;

    std::vector<int> suspects;
    for (const auto& [id, others] : contradicted_by)
        if (others.size() >= 2)
            suspects.push_back(id);

    if (suspects.size() > 1)
        throw SimulationError(
            "detect_false_broadcast: multiple contradicting claimers (outside the "
            "single-attacker assumption)");
    if (suspects.size() == 1) {
        result.outcome = BroadcastCheck::Outcome::SuspectIdentified;
        result.suspect = suspects.front();
    } else {
        // e.g. a vehicle emulating a severed predecessor link: only one
        // neighbour disagrees, majority identification is impossible.
        result.outcome = BroadcastCheck::Outcome::NotIdentifiable;
    }
    return result;
}

std::string to_text(const TopologyMatrix& D) {
    std::ostringstream out;
    for (const auto& [id, delta] : D.rows)
        out << id << ' ' << delta.pred_id << ' ' << delta.succ_id << '\n';
    return out.str();
}

TopologyMatrix topology_from_text(const std::string& text) {
    TopologyMatrix D;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        int id = 0;
        DeltaVec delta;
        if (!(fields >> id >> delta.pred_id >> delta.succ_id))
            throw ConfigError("topology text: expected 'id pred_id succ_id' per line");
        if (D.rows.contains(id))
            throw ConfigError("topology text: duplicate vehicle id");
        D.rows[id] = delta;
    }
    require_known_ids(D);
    return D;
}

}  // namespace platoon
