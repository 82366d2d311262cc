#pragma once

#include <limits>
#include <vector>

namespace flc {

/// Which runtime monitors are active. Everything is always computed and
/// recorded; monitors gate event-raising (vr_bounds -> BoundViolation) and
/// let sweeps trim per-record work they do not need.
struct MonitorSet {
    bool mass = true;
    bool vr_bounds = true;
    bool floor = true;
    bool z_plus = true;
    bool ur_z_ratio = true;
};

struct DiagConfig {
    double record_interval = 0.0;       ///< 0 -> T_end/100
    std::vector<double> energy_m{2, 3}; ///< ascending list of L^m norms to record
    MonitorSet monitors;
    bool keep_snapshots = false;  ///< retain the full state at each record time
};

/// One recorded row of run diagnostics. CSV column order is fixed:
/// t, dt, mass, mu, min_u, max_u, max_abs_ur, max_z_plus, floor_ratio,
/// vr_margin_min, ur_over_1_plus_zplus, lm_norms ascending, event_flag.
/// ur_min/ur_max stay in memory only (used by the comparison-envelope
/// diagnostic); they are not part of the CSV schema.
struct DiagnosticsRecord {
    double t = 0.0;
    double dt = 0.0;
    double mass = 0.0;
    double mu = 0.0;
    double min_u = 0.0;
    double max_u = 0.0;
    double max_abs_ur = 0.0;
    double max_z_plus = 0.0;
    double floor_ratio = 0.0;
    double vr_margin_min = 0.0;
    double ur_over_1_plus_zplus = 0.0;
    std::vector<double> lm_norms;
    int event_flag = 0;

    double ur_min = std::numeric_limits<double>::quiet_NaN();
    double ur_max = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace flc
