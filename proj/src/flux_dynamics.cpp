#include "flc/flux_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace flc {

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Completed: return "Completed";
        case EventKind::BlowUp: return "BlowUp";
        case EventKind::DtUnderflow: return "DtUnderflow";
        case EventKind::PositivityLoss: return "PositivityLoss";
        case EventKind::BoundViolation: return "BoundViolation";
    }
    return "?";
}

CellField make_initial_data(const InitialDataSpec& spec, const GridPtr& grid) {
    if (!(spec.base > 0.0)) throw std::invalid_argument("initial.base: must be > 0");
    if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0))
        throw std::invalid_argument("initial.amplitude: must be in [0,1) for positivity");
    const double R = grid->radius();
    switch (spec.kind) {
        case InitialKind::Constant:
            return make_cell_field(grid, spec.base);
        case InitialKind::CosineBump:
            return sample_cells(grid, [&](double r) {
                return spec.base * (1.0 + spec.amplitude * std::cos(M_PI * r / R));
            });
        case InitialKind::GaussianBump: {
            if (!(spec.width > 0.0)) throw std::invalid_argument("initial.width: must be > 0");
            return sample_cells(grid, [&](double r) {
                const double cut = std::cos(M_PI * r / (2.0 * R));
                return spec.base * (1.0 + spec.amplitude *
                                              std::exp(-r * r / (spec.width * spec.width)) *
                                              cut * cut);
            });
        }
    }
    throw std::invalid_argument("initial.kind: unknown");
}

FaceField assemble_flux(const CellField& u, const EllipticFields& ef, const ModelParams& params) {
    const auto& g = *u.grid;
    const int N = g.cells();
    const double h = g.h();
    FaceField F{u.grid, std::vector<double>(N + 1, 0.0)};
    for (int i = 1; i < N; ++i) {
        const double ubar = 0.5 * (u.v[i - 1] + u.v[i]);
        if (!(ubar > 0.0))
            throw std::domain_error("assemble_flux: nonpositive face average at face " +
                                    std::to_string(i));
        const double du = (u.v[i] - u.v[i - 1]) / h;
        const double vr = ef.vr_face.v[i];
        double geom = 1.0;
        for (int k = 0; k < g.n() - 1; ++k) geom *= g.face_radius(i);
        F.v[i] = geom * (std::pow(ubar, params.p) * du / std::sqrt(ubar * ubar + du * du) -
                         params.chi * std::pow(ubar, params.q) * vr / std::sqrt(1.0 + vr * vr));
    }
    return F;
}

CellField rhs_flux_form(const State& state, const EllipticFields& ef, const ModelParams& params) {
    const auto& g = *state.u.grid;
    const FaceField F = assemble_flux(state.u, ef, params);
    CellField out{state.u.grid, std::vector<double>(g.cells())};
    for (int i = 0; i < g.cells(); ++i)
        out.v[i] = (F.v[i + 1] - F.v[i]) / g.volume_weight(i);
    return out;
}

CellField neumann_derivative(const CellField& u, int order) {
    const auto& g = *u.grid;
    const int N = g.cells();
    const double h = g.h();
    const auto& a = u.v;
    CellField d{u.grid, std::vector<double>(N)};
    auto at = [&](int i) { return a[std::clamp(i, 0, N - 1)]; };
    if (order == 1) {
        for (int i = 0; i < N; ++i) d.v[i] = (at(i + 1) - at(i - 1)) / (2.0 * h);
    } else if (order == 2) {
        for (int i = 0; i < N; ++i) d.v[i] = (at(i + 1) - 2.0 * a[i] + at(i - 1)) / (h * h);
    } else {
        throw std::invalid_argument("neumann_derivative: order must be 1 or 2");
    }
    return d;
}

CellField rhs_expanded(const CellField& u, const CellField& u_r, const CellField& u_rr,
                       const EllipticFields& ef, const ModelParams& params) {
    const auto& g = *u.grid;
    const int N = g.cells();
    const double p = params.p, q = params.q, chi = params.chi;
    const int n = g.n();
    CellField out{u.grid, std::vector<double>(N)};
    for (int i = 0; i < N; ++i) {
        const double ui = u.v[i];
        if (!(ui > 0.0))
            throw std::domain_error("rhs_expanded: nonpositive u at cell " + std::to_string(i));
        const double ur = u_r.v[i];
        const double urr = u_rr.v[i];
        const double vr = ef.vr_cell.v[i];
        const double r = g.cell_center(i);
        const double S = std::sqrt(ui * ui + ur * ur);
        const double S3 = S * S * S;
        const double W = std::sqrt(1.0 + vr * vr);
        const double W3 = W * W * W;
        out.v[i] = std::pow(ui, p + 2) * urr / S3
                 + p * std::pow(ui, p - 1) * (ur * ur) * (ur * ur) / S3
                 + (n - 1) / r * std::pow(ui, p) * ur / S
                 + (p - 1) * std::pow(ui, p + 1) * ur * ur / S3
                 - q * chi * std::pow(ui, q - 1) * ur * vr / W
                 - chi * std::pow(ui, q) * (ef.mu - ui) / W3
                 - chi * (n - 1) / r * std::pow(ui, q) * vr * vr * vr / W3;
    }
    return out;
}

CellField rhs_expanded(const State& state, const EllipticFields& ef, const ModelParams& params) {
    const CellField ur = neumann_derivative(state.u, 1);
    const CellField urr = neumann_derivative(state.u, 2);
    return rhs_expanded(state.u, ur, urr, ef, params);
}

namespace {

double stable_dt(const CellField& u, const EllipticFields& ef, const ModelParams& params,
                 const StepControl& control) {
    const auto& g = *u.grid;
    const double h = g.h();
    const CellField ur = neumann_derivative(u, 1);
    double maxD = 0.0, maxS = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
        const double ui = u.v[i];
        const double S = std::sqrt(ui * ui + ur.v[i] * ur.v[i]);
        maxD = std::max(maxD, std::pow(ui, params.p + 2) / (S * S * S));
        const double vr = ef.vr_cell.v[i];
        maxS = std::max(maxS, params.chi * params.q * std::pow(ui, params.q - 1) *
                                  std::abs(vr) / std::sqrt(1.0 + vr * vr));
    }
    double dt = control.dt_max;
    if (maxD > 0.0) dt = std::min(dt, control.cfl_diff * h * h / maxD);
    if (maxS > 0.0) dt = std::min(dt, control.cfl_adv * h / maxS);
    return dt;
}

int first_nonpositive(const CellField& u) {
    for (int i = 0; i < u.size(); ++i)
        if (!(u.v[i] > 0.0)) return i;
    return -1;
}

}  // namespace

StepResult step(const State& state, const ModelParams& params, const StepControl& control,
                double dt_cap) {
    const int N = state.u.size();

    const EllipticFields ef0 = solve_gradient(state.u);
    const double dt = std::min(stable_dt(state.u, ef0, params, control), dt_cap);
    if (dt < control.dt_min && dt < dt_cap) {
        return {state, 0.0,
                EventReport{EventKind::DtUnderflow, state.t,
                            "dt=" + std::to_string(dt) + " below dt_min"}};
    }

    const CellField k1 = rhs_flux_form(state, ef0, params);
    CellField mid{state.u.grid, std::vector<double>(N)};
    for (int i = 0; i < N; ++i) mid.v[i] = state.u.v[i] + dt * k1.v[i];
    if (int i = first_nonpositive(mid); i >= 0) {
        return {state, dt,
                EventReport{EventKind::PositivityLoss, state.t + dt,
                            "predictor cell " + std::to_string(i) + " nonpositive"}};
    }

    const EllipticFields ef1 = solve_gradient(mid);
    const CellField k2 = rhs_flux_form(State{state.t + dt, mid}, ef1, params);

    State next{state.t + dt, CellField{state.u.grid, std::vector<double>(N)}};
    for (int i = 0; i < N; ++i)
        next.u.v[i] = state.u.v[i] + 0.5 * dt * (k1.v[i] + k2.v[i]);
    if (int i = first_nonpositive(next.u); i >= 0) {
        return {state, dt,
                EventReport{EventKind::PositivityLoss, state.t + dt,
                            "corrector cell " + std::to_string(i) + " nonpositive"}};
    }
    return {std::move(next), dt, std::nullopt};
}

StateTriple sample_triple(const ModelParams& params, const InitialDataSpec& initial,
                          const GridSpec& grid, const StepControl& control, double t_center,
                          double delta) {
    GridSpec gs = grid;
    gs.dimension = params.n;
    gs.radius = params.R;
    const GridPtr g = build_grid(gs);
    State state{0.0, make_initial_data(initial, g)};

    const double targets[3] = {t_center - delta, t_center, t_center + delta};
    if (!(targets[0] > 0.0)) throw std::invalid_argument("sample_triple: t_center - delta <= 0");

    StateTriple out;
    State* slots[3] = {&out.prev, &out.mid, &out.next};
    for (int k = 0; k < 3; ++k) {
        while (state.t < targets[k]) {
            StepResult sr = step(state, params, control, targets[k] - state.t);
            if (sr.event)
                throw std::runtime_error(std::string("sample_triple: event before capture: ") +
                                         to_string(sr.event->kind));
            state = std::move(sr.state);
        }
        state.t = targets[k];  // absorb the landing-step roundoff
        *slots[k] = state;
    }
    return out;
}

namespace {

DiagnosticsRecord make_record(const State& state, double dt, const EllipticFields& ef,
                              const ModelParams& params, const StepControl& control,
                              const DiagConfig& diag, double inf_u0, double running_sup) {
    DiagnosticsRecord rec;
    rec.t = state.t;
    rec.dt = dt;
    rec.mass = cell_integral(state.u);
    rec.mu = ef.mu;
    const auto [mn, mx] = std::minmax_element(state.u.v.begin(), state.u.v.end());
    rec.min_u = *mn;
    rec.max_u = *mx;

    const DerivedField ur = derivative_field(state.u, 1);
    rec.ur_min = *std::min_element(ur.values.v.begin(), ur.values.v.end());
    rec.ur_max = *std::max_element(ur.values.v.begin(), ur.values.v.end());
    rec.max_abs_ur = std::max(std::abs(rec.ur_min), std::abs(rec.ur_max));

    if (diag.monitors.z_plus || diag.monitors.ur_z_ratio) {
        const CellField z = rhs_expanded(state, ef, params);
        double zp = 0.0;
        for (int i = 0; i < state.u.size(); ++i)
            zp = std::max(zp, z.v[i] / state.u.v[i]);
        rec.max_z_plus = zp;
    }
    rec.ur_over_1_plus_zplus = rec.max_abs_ur / (1.0 + rec.max_z_plus);

    if (diag.monitors.floor) {
        const double kap = 2.0 * params.chi * ef.mu * std::pow(running_sup, params.q - 1.0);
        rec.floor_ratio = rec.min_u / (inf_u0 * std::exp(-kap * state.t));
    }

    const BoundReport br = check_vr_bounds(state.u, ef, rec.max_u, control.tol_bound);
    rec.vr_margin_min = std::min(std::min(br.vr_upper_margin, br.vr_lower_margin),
                                 std::min(br.vr_linfty_margin, br.vrr_margin));

    rec.lm_norms.reserve(diag.energy_m.size());
    for (double m : diag.energy_m) {
        double s = 0.0;
        const auto& g = *state.u.grid;
        for (int i = 0; i < state.u.size(); ++i)
            s += g.volume_weight(i) * std::pow(state.u.v[i], m);
        rec.lm_norms.push_back(std::pow(s, 1.0 / m));
    }
    return rec;
}

int event_flag_of(EventKind kind) {
    switch (kind) {
        case EventKind::BlowUp: return 1;
        case EventKind::DtUnderflow: return 2;
        case EventKind::PositivityLoss: return 3;
        case EventKind::BoundViolation: return 4;
        default: return 0;
    }
}

}  // namespace

RunResult run(const ModelParams& params, const InitialDataSpec& initial, const GridSpec& grid,
              const StepControl& control, double T_end, const DiagConfig& diag) {
    validate(params);
    if (!(T_end > 0.0)) throw std::invalid_argument("T_end: must be > 0");
    const double interval = diag.record_interval > 0.0 ? diag.record_interval : T_end / 100.0;
    if (interval > T_end + 1e-15 * T_end)
        throw std::invalid_argument("record_interval: must be <= T_end");

    GridSpec gs = grid;
    gs.dimension = params.n;
    gs.radius = params.R;
    const GridPtr g = build_grid(gs);

    RunResult res;
    res.final_state = State{0.0, make_initial_data(initial, g)};
    State& state = res.final_state;
    res.inf_u0 = *std::min_element(state.u.v.begin(), state.u.v.end());
    res.sup_max_u = *std::max_element(state.u.v.begin(), state.u.v.end());

    auto record = [&](double dt_used, const EllipticFields& ef) {
        res.records.push_back(
            make_record(state, dt_used, ef, params, control, diag, res.inf_u0, res.sup_max_u));
        if (diag.keep_snapshots) res.snapshots.push_back(state);
    };

    {
        const EllipticFields ef = solve_gradient(state.u);
        record(0.0, ef);
        if (res.sup_max_u > control.blowup_threshold) {
            res.event = EventReport{EventKind::BlowUp, 0.0, "max u0 above threshold"};
            res.records.back().event_flag = event_flag_of(res.event.kind);
            return res;
        }
    }

    double next_record = interval;
    while (state.t < T_end) {
        StepResult sr = step(state, params, control);
        if (sr.event) {
            res.event = *sr.event;
            const EllipticFields ef = solve_gradient(state.u);
            record(sr.dt_used, ef);
            res.records.back().event_flag = event_flag_of(res.event.kind);
            return res;
        }
        state = std::move(sr.state);
        ++res.steps;
        const double mx = *std::max_element(state.u.v.begin(), state.u.v.end());
        res.sup_max_u = std::max(res.sup_max_u, mx);

        const bool done = state.t >= T_end;
        const bool blew = mx > control.blowup_threshold;
        if (blew || done || state.t >= next_record - 1e-12 * interval) {
            const EllipticFields ef = solve_gradient(state.u);
            record(sr.dt_used, ef);
            while (next_record <= state.t + 1e-12 * interval) next_record += interval;
            if (blew) {
                res.event = EventReport{EventKind::BlowUp, state.t,
                                        "max u exceeded blowup_threshold"};
                res.records.back().event_flag = event_flag_of(res.event.kind);
                return res;
            }
            if (diag.monitors.vr_bounds) {
                const double tol = control.tol_bound * std::max(1.0, mx);
                if (res.records.back().vr_margin_min < -tol) {
                    res.event = EventReport{EventKind::BoundViolation, state.t,
                                            "v_r/v_rr bound margin below tolerance"};
                    res.records.back().event_flag = event_flag_of(res.event.kind);
                    return res;
                }
            }
        }
    }
    res.event = EventReport{EventKind::Completed, state.t, ""};
    return res;
}

}  // namespace flc
