#include "flc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "flc/estimates.hpp"

namespace flc {

using nlohmann::json;

bool log_enabled(LogLevel level) {
    static const int threshold = [] {
        const char* env = std::getenv("FLC_LOG");
        if (!env) return 0;
        const std::string v = env;
        if (v == "debug") return 2;
        if (v == "info") return 1;
        return 0;
    }();
    return static_cast<int>(level) <= threshold;
}

void log_line(LogLevel level, const std::string& msg) {
    if (log_enabled(level)) std::cerr << "[flc] " << msg << "\n";
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

double get_number(const json& j, const std::string& path, const std::string& key, double fallback,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(path + "." + key, "missing");
        return fallback;
    }
    if (!j[key].is_number()) throw ConfigError(path + "." + key, "must be a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const std::string& key, int fallback,
            bool required = false) {
    if (!j.contains(key)) {
        if (required) throw ConfigError(path + "." + key, "missing");
        return fallback;
    }
    if (!j[key].is_number_integer()) throw ConfigError(path + "." + key, "must be an integer");
    return j[key].get<int>();
}

InitialKind parse_kind(const std::string& s, const std::string& path) {
    if (s == "constant") return InitialKind::Constant;
    if (s == "cosine_bump") return InitialKind::CosineBump;
    if (s == "gaussian_bump") return InitialKind::GaussianBump;
    throw ConfigError(path, "unknown kind '" + s + "'");
}

RunConfig parse_run(const json& j) {
    RunConfig cfg;
    if (!j.contains("params")) throw ConfigError("params", "missing");
    const json& jp = j["params"];
    cfg.params.p = get_number(jp, "params", "p", 1.0, true);
    cfg.params.q = get_number(jp, "params", "q", 1.0, true);
    cfg.params.chi = get_number(jp, "params", "chi", 1.0, true);
    cfg.params.n = get_int(jp, "params", "n", 1, true);
    cfg.params.R = get_number(jp, "params", "R", 1.0, true);
    if (!(cfg.params.p >= 1.0)) throw ConfigError("params.p", "must be >= 1");
    if (!(cfg.params.q >= 1.0)) throw ConfigError("params.q", "must be >= 1");
    if (!(cfg.params.chi > 0.0)) throw ConfigError("params.chi", "must be > 0");
    if (cfg.params.n < 1) throw ConfigError("params.n", "must be >= 1");
    if (!(cfg.params.R > 0.0)) throw ConfigError("params.R", "must be > 0");

    if (!j.contains("initial")) throw ConfigError("initial", "missing");
    const json& ji = j["initial"];
    if (!ji.contains("kind") || !ji["kind"].is_string())
        throw ConfigError("initial.kind", "missing or not a string");
    cfg.initial.kind = parse_kind(ji["kind"].get<std::string>(), "initial.kind");
    cfg.initial.base = get_number(ji, "initial", "base", 1.0, true);
    cfg.initial.amplitude = get_number(ji, "initial", "amplitude", 0.0);
    cfg.initial.width = get_number(ji, "initial", "width", 0.25);
    if (!(cfg.initial.base > 0.0)) throw ConfigError("initial.base", "must be > 0");
    if (!(cfg.initial.amplitude >= 0.0 && cfg.initial.amplitude < 1.0))
        throw ConfigError("initial.amplitude", "must be in [0,1) for positivity of u0");
    if (cfg.initial.kind == InitialKind::GaussianBump && !(cfg.initial.width > 0.0))
        throw ConfigError("initial.width", "must be > 0");

    if (!j.contains("grid")) throw ConfigError("grid", "missing");
    cfg.grid.cell_count = get_int(j["grid"], "grid", "N", 0, true);
    if (cfg.grid.cell_count < 4) throw ConfigError("grid.N", "must be >= 4");
    cfg.grid.dimension = cfg.params.n;
    cfg.grid.radius = cfg.params.R;

    if (j.contains("control")) {
        const json& jc = j["control"];
        cfg.control.cfl_diff = get_number(jc, "control", "cfl_diff", cfg.control.cfl_diff);
        cfg.control.cfl_adv = get_number(jc, "control", "cfl_adv", cfg.control.cfl_adv);
        cfg.control.dt_min = get_number(jc, "control", "dt_min", cfg.control.dt_min);
        cfg.control.dt_max = get_number(jc, "control", "dt_max", cfg.control.dt_max);
        cfg.control.blowup_threshold =
            get_number(jc, "control", "blowup_threshold", cfg.control.blowup_threshold);
        cfg.control.tol_bound = get_number(jc, "control", "tol_bound", cfg.control.tol_bound);
    }
    if (!(cfg.control.cfl_diff > 0.0 && cfg.control.cfl_diff <= 1.0))
        throw ConfigError("control.cfl_diff", "must be in (0,1]");
    if (!(cfg.control.cfl_adv > 0.0 && cfg.control.cfl_adv <= 1.0))
        throw ConfigError("control.cfl_adv", "must be in (0,1]");
    if (!(cfg.control.dt_min < cfg.control.dt_max))
        throw ConfigError("control.dt_min", "must be < dt_max");
    if (!(cfg.control.blowup_threshold > 0.0))
        throw ConfigError("control.blowup_threshold", "must be > 0");

    cfg.T_end = get_number(j, "", "T_end", 0.0, true);
    if (!(cfg.T_end > 0.0)) throw ConfigError("T_end", "must be > 0");
    cfg.diag.record_interval = get_number(j, "", "record_interval", cfg.T_end / 100.0);
    if (!(cfg.diag.record_interval > 0.0 && cfg.diag.record_interval <= cfg.T_end))
        throw ConfigError("record_interval", "must be in (0, T_end]");

    if (j.contains("energy_m")) {
        if (!j["energy_m"].is_array()) throw ConfigError("energy_m", "must be an array");
        cfg.diag.energy_m.clear();
        for (const auto& v : j["energy_m"]) {
            if (!v.is_number() || v.get<double>() < 1.0)
                throw ConfigError("energy_m", "entries must be numbers >= 1");
            cfg.diag.energy_m.push_back(v.get<double>());
        }
        std::sort(cfg.diag.energy_m.begin(), cfg.diag.energy_m.end());
    }
    if (j.contains("monitors")) {
        if (!j["monitors"].is_array()) throw ConfigError("monitors", "must be an array");
        MonitorSet m{false, false, false, false, false};
        for (const auto& v : j["monitors"]) {
            const std::string s = v.get<std::string>();
            if (s == "mass") m.mass = true;
            else if (s == "vr_bounds") m.vr_bounds = true;
            else if (s == "floor") m.floor = true;
            else if (s == "z_plus") m.z_plus = true;
            else if (s == "ur_z_ratio") m.ur_z_ratio = true;
            else throw ConfigError("monitors", "unknown monitor '" + s + "'");
        }
        cfg.diag.monitors = m;
    }
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed_label")) cfg.seed_label = j["seed_label"].get<std::string>();
    return cfg;
}

template <class T>
std::vector<T> parse_axis(const json& js, const std::string& key, T fallback) {
    std::vector<T> out;
    if (!js.contains(key)) return {fallback};
    if (!js[key].is_array()) throw ConfigError("sweep." + key, "must be an array");
    for (const auto& v : js[key]) out.push_back(v.get<T>());
    if (out.empty()) throw ConfigError("sweep." + key, "must be nonempty");
    return out;
}

}  // namespace

std::variant<RunConfig, SweepConfig> parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("(root)", std::string("invalid JSON: ") + e.what());
    }
    RunConfig base = parse_run(j);
    if (!j.contains("sweep")) return base;

    const json& js = j["sweep"];
    SweepConfig sweep;
    sweep.base = base;
    sweep.p = parse_axis<double>(js, "p", base.params.p);
    sweep.q = parse_axis<double>(js, "q", base.params.q);
    sweep.chi = parse_axis<double>(js, "chi", base.params.chi);
    sweep.n = parse_axis<int>(js, "n", base.params.n);
    sweep.amplitude = parse_axis<double>(js, "amplitude", base.initial.amplitude);
    sweep.jobs = get_int(j, "", "jobs", 1);
    if (sweep.jobs < 1) throw ConfigError("jobs", "must be >= 1");
    for (double p : sweep.p)
        if (!(p >= 1.0)) throw ConfigError("sweep.p", "entries must be >= 1");
    for (double q : sweep.q)
        if (!(q >= 1.0)) throw ConfigError("sweep.q", "entries must be >= 1");
    for (double chi : sweep.chi)
        if (!(chi > 0.0)) throw ConfigError("sweep.chi", "entries must be > 0");
    for (int n : sweep.n)
        if (n < 1) throw ConfigError("sweep.n", "entries must be >= 1");
    for (double a : sweep.amplitude)
        if (!(a >= 0.0 && a < 1.0)) throw ConfigError("sweep.amplitude", "entries must be in [0,1)");
    return sweep;
}

std::variant<RunConfig, SweepConfig> parse_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError(file.string(), "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string diagnostics_csv(const std::vector<DiagnosticsRecord>& records,
                            const std::vector<double>& energy_m) {
    std::string out =
        "t,dt,mass,mu,min_u,max_u,max_abs_ur,max_z_plus,floor_ratio,vr_margin_min,"
        "ur_over_1_plus_zplus";
    for (double m : energy_m) out += ",lm_" + format_double(m);
    out += ",event_flag\n";
    for (const auto& r : records) {
        out += format_double(r.t);
        for (double x : {r.dt, r.mass, r.mu, r.min_u, r.max_u, r.max_abs_ur, r.max_z_plus,
                         r.floor_ratio, r.vr_margin_min, r.ur_over_1_plus_zplus})
            out += "," + format_double(x);
        for (double x : r.lm_norms) out += "," + format_double(x);
        out += "," + std::to_string(r.event_flag) + "\n";
    }
    return out;
}

std::string snapshot_json(const State& state) {
    const EllipticFields ef = solve_gradient(state.u);
    json j;
    j["t"] = state.t;
    j["grid"] = {{"n", state.u.grid->n()},
                 {"R", state.u.grid->radius()},
                 {"N", state.u.grid->cells()}};
    j["u"] = state.u.v;
    j["vr"] = ef.vr_face.v;
    j["vrr"] = ef.vrr_cell.v;
    return j.dump();
}

namespace {

int exit_code_of(EventKind kind) {
    switch (kind) {
        case EventKind::Completed: return 0;
        case EventKind::BlowUp: return 2;
        default: return 3;
    }
}

struct SweepRow {
    double p, q, chi;
    int n;
    double amplitude;
    std::string label;
    std::string outcome;
    double sup_max_u;
    long steps;
    double seconds;
};

}  // namespace

int simulate_command(const RunConfig& config) {
    namespace fs = std::filesystem;
    const fs::path dir = config.output_dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    fs::create_directories(dir / "snapshots", ec);
    if (ec) throw ConfigError("output_dir", "not writable: " + ec.message());

    log_line(LogLevel::Info, "simulate: T_end=" + format_double(config.T_end) +
                                 " N=" + std::to_string(config.grid.cell_count));
    DiagConfig diag = config.diag;
    diag.keep_snapshots = true;
    const RunResult res =
        run(config.params, config.initial, config.grid, config.control, config.T_end, diag);

    std::ofstream csv(dir / "diagnostics.csv");
    csv << diagnostics_csv(res.records, config.diag.energy_m);

    for (size_t i = 0; i < res.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%06zu.json", i);
        std::ofstream snap(dir / "snapshots" / name);
        snap << snapshot_json(res.snapshots[i]) << "\n";
    }
    std::ofstream ev(dir / "event.json");
    json je;
    je["kind"] = to_string(res.event.kind);
    je["t_event"] = res.event.t_event;
    je["detail"] = res.event.detail;
    je["steps"] = res.steps;
    if (!config.seed_label.empty()) je["seed_label"] = config.seed_label;
    ev << je.dump(2) << "\n";

    log_line(LogLevel::Info, std::string("simulate: event=") + to_string(res.event.kind) +
                                 " at t=" + format_double(res.event.t_event));
    return exit_code_of(res.event.kind);
}

int sweep_command(const SweepConfig& config, const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("out", "not writable: " + ec.message());

    struct Point {
        double p, q, chi;
        int n;
        double amplitude;
    };
    std::vector<Point> points;
    for (double p : config.p)
        for (double q : config.q)
            for (double chi : config.chi)
                for (int n : config.n)
                    for (double a : config.amplitude) points.push_back({p, q, chi, n, a});
    std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
        return std::tie(a.p, a.q, a.chi, a.n, a.amplitude) <
               std::tie(b.p, b.q, b.chi, b.n, b.amplitude);
    });

    std::vector<SweepRow> rows(points.size());
    std::atomic<size_t> next{0};
    const int jobs = std::max(1, config.jobs);
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            const Point& pt = points[i];
            RunConfig rc = config.base;
            rc.params.p = pt.p;
            rc.params.q = pt.q;
            rc.params.chi = pt.chi;
            rc.params.n = pt.n;
            rc.initial.amplitude = pt.amplitude;
            rc.grid.dimension = pt.n;

            SweepRow row{pt.p, pt.q, pt.chi, pt.n, pt.amplitude, "", "failed", 0.0, 0, 0.0};
            row.label = to_string(classify_regime(pt.p, pt.q, pt.n));
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const RunResult res = run(rc.params, rc.initial, rc.grid, rc.control, rc.T_end,
                                          rc.diag);
                row.sup_max_u = res.sup_max_u;
                row.steps = res.steps;
                row.outcome = res.event.kind == EventKind::Completed ? "completed"
                              : res.event.kind == EventKind::BlowUp  ? "blowup"
                                                                     : "failed";
            } catch (const std::exception& e) {
                log_line(LogLevel::Error, std::string("sweep point failed: ") + e.what());
                row.outcome = "failed";
            }
            row.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rows[i] = std::move(row);
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    std::string atlas = "p,q,chi,n,amplitude,label,outcome,sup_max_u,steps\n";
    std::string timings = "p,q,chi,n,amplitude,seconds\n";
    for (const auto& r : rows) {
        const std::string key = format_double(r.p) + "," + format_double(r.q) + "," +
                                format_double(r.chi) + "," + std::to_string(r.n) + "," +
                                format_double(r.amplitude);
        atlas += key + "," + r.label + "," + r.outcome + "," + format_double(r.sup_max_u) + "," +
                 std::to_string(r.steps) + "\n";
        timings += key + "," + format_double(r.seconds) + "\n";
    }
    std::ofstream(out_dir / "atlas.csv") << atlas;
    std::ofstream(out_dir / "timings.csv") << timings;
    return 0;
}

int classify_command(double p, double q, int n) {
    const RegimeLabel label = classify_regime(p, q, n);
    std::cout << to_string(label) << " (threshold " << format_double(regime_threshold(q, n))
              << ")\n";
    return 0;
}

}  // namespace flc
