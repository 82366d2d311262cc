#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "flc/diagnostics.hpp"
#include "flc/flux_dynamics.hpp"
#include "flc/model_params.hpp"

namespace flc {

/// A fully validated single-run configuration. The grid dimension and radius
/// always come from params; configs only choose N.
struct RunConfig {
    ModelParams params;
    InitialDataSpec initial;
    GridSpec grid;
    StepControl control;
    double T_end = 1.0;
    DiagConfig diag;
    std::string output_dir = "out";
    std::string seed_label;
};

struct SweepConfig {
    std::vector<double> p, q, chi, amplitude;
    std::vector<int> n;
    RunConfig base;
    int jobs = 1;
};

/// Configuration error carrying the first violated field path; the CLI maps
/// it to exit code 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what) {}
};

std::variant<RunConfig, SweepConfig> parse_config(const std::filesystem::path& file);
std::variant<RunConfig, SweepConfig> parse_config_text(const std::string& text);

/// Shortest round-trip decimal formatting for CSV cells.
std::string format_double(double x);

/// Fixed-column diagnostics CSV (see DiagnosticsRecord for the order).
std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                            const std::vector<double>& energy_m);

/// Snapshot JSON: {"t":..., "grid":{"n":..,"R":..,"N":..}, "u":[...],
/// "vr":[...], "vrr":[...]}; u, vrr in cell order, vr at faces.
std::string snapshot_json(const State& state);

/// Exit codes: 0 success, 2 blow-up, 3 verification/invariant failure,
/// 4 configuration error.
int simulate_command(const RunConfig& config);

/// Runs the cartesian sweep with `jobs` workers and writes atlas.csv (rows
/// sorted by parameter tuple; byte-identical across job counts) plus
/// timings.csv (wall-clock, excluded from the determinism contract).
int sweep_command(const SweepConfig& config, const std::filesystem::path& out_dir);

int classify_command(double p, double q, int n);

/// Minimal stderr logger gated by FLC_LOG in {error, info, debug}.
enum class LogLevel { Error = 0, Info = 1, Debug = 2 };
bool log_enabled(LogLevel level);
void log_line(LogLevel level, const std::string& msg);

}  // namespace flc
