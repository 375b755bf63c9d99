#ifndef PLATOON_GAIN_TUNING_HPP
#define PLATOON_GAIN_TUNING_HPP

#include "platoon/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace platoon {

/// ACC/CACC controller gains.
///
/// k and c are fixed by the collision-avoidance construction once d, h,
/// v_des and the limits are chosen:
///   k = -u_min / (d - h*v_des)     c = v_max / (d - h*v_des)
/// alpha scales the feed-forward authority cap (1 = full authority).
struct ControllerGains {
    double k;            ///< position gain [1/s^2]
    double h;            ///< headway-like parameter [s]
    double c;            ///< relative-velocity gain [1/s]
    double alpha = 1.0;  ///< feed-forward authority fraction, in [0, 1]
};

/// Thrown when d - h*v_des <= 0 and the gain formulas are undefined.
class InfeasibleHeadwayError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown by tune_gains when no h on the search grid is feasible.
class NoFeasibleHeadwayError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

double compute_k(double d, double h, double v_des, const ActuationLimits& limits);
double compute_c(double d, double h, double v_des, const ActuationLimits& limits);

/// |G(j*omega)| of the vehicle-to-vehicle transfer function
/// G(s) = (c s + k) / (s^2 + (c + h k) s + k).
double transfer_magnitude(const ControllerGains& gains, double omega);

struct StringStabilityReport {
    bool ok = false;
    bool pole_below_zero = false;  ///< smaller pole magnitude < zero magnitude k/c
    bool not_underdamped = false;  ///< (c + h k)^2 - 4 k > 0
    std::string violation;         ///< names the violated inequality, empty if ok
};

/// Strict evaluation of the two string-stability inequalities.
StringStabilityReport string_stability_ok(const ControllerGains& gains);

/// Boolean feasibility grid over (d, h) for fixed v_des and limits.
struct FeasibleRegion {
    std::vector<double> d_grid;
    std::vector<double> h_grid;
    std::vector<std::uint8_t> cells;  ///< row-major, d index outer

    bool at(std::size_t di, std::size_t hi) const {
        return cells[di * h_grid.size() + hi] != 0;
    }
};

FeasibleRegion feasible_region(const std::vector<double>& d_grid,
                               const std::vector<double>& h_grid, double v_des,
                               const ActuationLimits& limits);

/// Writes the region as CSV with header "d,h,feasible".
void export_region_csv(const FeasibleRegion& region, const std::string& path);

struct TuneOptions {
    /// Grid resolution of the h scan. The scan starts at one resolution step
    /// and picks the smallest feasible grid point.
    double h_resolution = 1e-2;
    double alpha = 1.0;
};

/// Smallest-h gain synthesis: scans h on a grid and returns the gains for
/// the first h where the formulas are defined and string stability holds.
ControllerGains tune_gains(double d, double v_des, const ActuationLimits& limits,
                           const TuneOptions& options = {});

/// Worst-case reachable p_tilde during an emergency brake started at
/// relative velocity v_tilde and ego velocity v:
///   d - (c/k - v/(-u_min)) * v_tilde - v_tilde^2 / (2 * (-u_min))
double p_tilde_max(double v_tilde, double v, const ControllerGains& gains,
                   const ActuationLimits& limits, double d);

}  // namespace platoon

#endif
