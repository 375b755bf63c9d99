#include "platoon/replay.hpp"

#include "platoon/csv.hpp"
#include "platoon/simulation.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace platoon {

namespace {

double parse_double(const std::string& field, const char* what) {
    try {
        std::size_t used = 0;
        const double value = std::stod(field, &used);
        if (used != field.size())
            throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw SimulationError(std::string("replay: malformed ") + what +
                              " field '" + field + "'");
    }
}

int parse_int(const std::string& field, const char* what) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(field, &used);
        if (used != field.size())
            throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw SimulationError(std::string("replay: malformed ") + what +
                              " field '" + field + "'");
    }
}

struct Record {
    double t = 0.0;
    int vehicle_id = 0;
    double u_total = 0.0;
    double v_tilde = 0.0;
    int vtf = 0;
};

}  // namespace

ReplayResult replay_detector(const std::string& trace_csv,
                             const DetectorConfig& config,
                             const ReplayOverlay& overlay) {
    config.validate();
    std::istringstream in(trace_csv);
    std::string line;
    if (!std::getline(in, line))
        throw SimulationError("replay: empty trace");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != kTraceHeader)
        throw SimulationError("replay: unexpected trace header");

    std::vector<Record> records;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::vector<std::string> fields = csv::split_line(line);
        if (fields.size() != 17)
            throw SimulationError("replay: expected 17 columns per row");
        Record rec;
        rec.t = parse_double(fields[0], "t");
        rec.vehicle_id = parse_int(fields[1], "vehicle_id");
        rec.u_total = parse_double(fields[7], "u_total");
        rec.v_tilde = fields[11] == "nan" ? 0.0 : parse_double(fields[11], "v_tilde");
        rec.vtf = parse_int(fields[16], "vtf");
        records.push_back(rec);
    }

    ReplayResult result;
    if (records.empty())
        return result;

    double dt = 0.0;
    for (const Record& rec : records)
        if (rec.t > records.front().t) {
            dt = rec.t - records.front().t;
            break;
        }
    if (!(dt > 0.0))
        throw SimulationError("replay: trace has a single time step");

    Rng noise(overlay.seed);
    std::map<int, DetectorState> states;
    std::map<int, bool> was_latched;
    // A recorded u_total at time t produces the motion over [t, t+dt], so
    // the detector pairs the previous step's commands with the current
    // measurement, exactly as the online detector does.
    std::map<int, Record> prev;

    std::size_t i = 0;
    while (i < records.size()) {
        const double t = records[i].t;
        std::map<int, Record> at_t;
        while (i < records.size() && records[i].t == t) {
            at_t[records[i].vehicle_id] = records[i];
            ++i;
        }
        for (const auto& [id, rec] : at_t) {
            if (rec.vtf == 0)
                continue;
            double v_tilde = rec.v_tilde;
            if (overlay.kind == ReplayOverlay::Kind::Gaussian)
                v_tilde += overlay.sd * noise.gaussian();

            DetectorState& state = states[id];
            const auto prev_ego = prev.find(id);
            const auto prev_pred = prev.find(rec.vtf);
            double r = 0.0;
            if (prev_ego == prev.end() || prev_pred == prev.end()) {
                reset_detector(state, v_tilde);
            } else {
                double u_pred = prev_pred->second.u_total;
                if (overlay.kind == ReplayOverlay::Kind::Sinusoid &&
                    rec.vtf == overlay.sender)
                    u_pred = overlay.amplitude *
                             std::sin(overlay.phase +
                                      2.0 * std::numbers::pi * overlay.freq *
                                          prev_pred->second.t);
                r = detector_step(state, config, prev_ego->second.u_total,
                                  u_pred, v_tilde, dt);
            }
            if (state.latched && !was_latched[id]) {
                was_latched[id] = true;
                ++result.alarms;
            }
            result.rows.push_back(ReplayRow{t, id, r, state.sigma});
        }
        prev = std::move(at_t);
    }
    return result;
}

std::string replay_to_csv(const ReplayResult& result) {
    std::ostringstream out;
    out << "t,vehicle_id,r,sigma\n";
    for (const ReplayRow& row : result.rows)
        out << csv::format(row.t) << ',' << row.vehicle_id << ','
            << csv::format(row.r) << ',' << row.sigma << '\n';
    return out.str();
}

}  // namespace platoon
