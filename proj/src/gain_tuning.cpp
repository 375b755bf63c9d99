#include "platoon/gain_tuning.hpp"

#include "platoon/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace platoon {

namespace {

double headway_denominator(double d, double h, double v_des) {
    const double den = d - h * v_des;
    if (!(den > 0.0)) {
        std::ostringstream msg;
        msg << "infeasible headway: d - h*v_des = " << den
            << " (d=" << d << ", h=" << h << ", v_des=" << v_des << ")";
        throw InfeasibleHeadwayError(msg.str());
    }
    return den;
}

}  // namespace

double compute_k(double d, double h, double v_des, const ActuationLimits& limits) {
    limits.validate();
    return -limits.u_min / headway_denominator(d, h, v_des);
}

double compute_c(double d, double h, double v_des, const ActuationLimits& limits) {
    limits.validate();
    return limits.v_max / headway_denominator(d, h, v_des);
}

double transfer_magnitude(const ControllerGains& gains, double omega) {
    const double k = gains.k;
    const double c = gains.c;
    const double b = c + gains.h * k;
    const double w2 = omega * omega;
    const double num = c * c * w2 + k * k;
    const double den = (k - w2) * (k - w2) + b * b * w2;
    return std::sqrt(num / den);
}

StringStabilityReport string_stability_ok(const ControllerGains& gains) {
    StringStabilityReport report;
    const double k = gains.k;
    const double c = gains.c;
    const double b = c + gains.h * k;

    const double discriminant = b * b - 4.0 * k;
    report.not_underdamped = discriminant > 0.0;

    if (report.not_underdamped) {
        const double smaller_pole = 0.5 * b - 0.5 * std::sqrt(discriminant);
        report.pole_below_zero = smaller_pole < k / c;
    }

    report.ok = report.pole_below_zero && report.not_underdamped;
    if (!report.not_underdamped)
        report.violation = "(c+hk)^2 - 4k > 0 violated (underdamped)";
    else if (!report.pole_below_zero)
        report.violation = "(c+hk)/2 - sqrt((c+hk)^2-4k)/2 < k/c violated";
    return report;
}

FeasibleRegion feasible_region(const std::vector<double>& d_grid,
                               const std::vector<double>& h_grid, double v_des,
                               const ActuationLimits& limits) {
    if (d_grid.empty() || h_grid.empty())
        throw ConfigError("feasible_region: grids must be non-empty");
    for (std::size_t i = 1; i < d_grid.size(); ++i)
        if (!(d_grid[i] > d_grid[i - 1]))
            throw ConfigError("feasible_region: d grid must be strictly increasing");
    for (std::size_t i = 1; i < h_grid.size(); ++i)
        if (!(h_grid[i] > h_grid[i - 1]))
            throw ConfigError("feasible_region: h grid must be strictly increasing");

    FeasibleRegion region;
    region.d_grid = d_grid;
    region.h_grid = h_grid;
    region.cells.assign(d_grid.size() * h_grid.size(), 0);
    for (std::size_t di = 0; di < d_grid.size(); ++di) {
        for (std::size_t hi = 0; hi < h_grid.size(); ++hi) {
            const double d = d_grid[di];
            const double h = h_grid[hi];
            if (!(d - h * v_des > 0.0))
                continue;
            ControllerGains gains{compute_k(d, h, v_des, limits), h,
                                  compute_c(d, h, v_des, limits)};
            if (string_stability_ok(gains).ok)
                region.cells[di * h_grid.size() + hi] = 1;
        }
    }
    return region;
}

void export_region_csv(const FeasibleRegion& region, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw SimulationError("cannot open for writing: " + path);
    out << "d,h,feasible\n";
    for (std::size_t di = 0; di < region.d_grid.size(); ++di)
        for (std::size_t hi = 0; hi < region.h_grid.size(); ++hi)
            out << csv::format(region.d_grid[di]) << ','
                << csv::format(region.h_grid[hi]) << ','
                << (region.at(di, hi) ? 1 : 0) << '\n';
}

ControllerGains tune_gains(double d, double v_des, const ActuationLimits& limits,
                           const TuneOptions& options) {
    limits.validate();
    if (!(options.h_resolution > 0.0))
        throw ConfigError("tune_gains: h resolution must be > 0");
    if (!(options.alpha >= 0.0 && options.alpha <= 1.0))
        throw ConfigError("tune_gains: alpha must be in [0, 1]");

    const double h_limit = d / v_des;  // k, c -> infinity at this boundary
    for (double h = options.h_resolution; h < h_limit; h += options.h_resolution) {
        if (!(d - h * v_des > 0.0))
            break;
        ControllerGains gains{compute_k(d, h, v_des, limits), h,
                              compute_c(d, h, v_des, limits), options.alpha};
        if (string_stability_ok(gains).ok)
            return gains;
    }
    std::ostringstream msg;
    msg << "no feasible h in (0, " << h_limit << ") at resolution "
        << options.h_resolution << " for d=" << d << ", v_des=" << v_des;
    throw NoFeasibleHeadwayError(msg.str());
}

double p_tilde_max(double v_tilde, double v, const ControllerGains& gains,
                   const ActuationLimits& limits, double d) {
    const double brake = -limits.u_min;
    return d - (gains.c / gains.k - v / brake) * v_tilde -
           0.5 * v_tilde * v_tilde / brake;
}

}  // namespace platoon
