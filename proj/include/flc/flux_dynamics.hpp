#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flc/diagnostics.hpp"
#include "flc/elliptic_field.hpp"
#include "flc/model_params.hpp"
#include "flc/radial_grid.hpp"

namespace flc {

/// Positive solution state at time t.
struct State {
    double t = 0.0;
    CellField u;
};

struct StepControl {
    double cfl_diff = 0.4;
    double cfl_adv = 0.5;
    double dt_min = 1e-12;
    double dt_max = 1e-2;
    double blowup_threshold = 1e6;
    double tol_bound = 1e-10;
};

enum class EventKind { Completed, BlowUp, DtUnderflow, PositivityLoss, BoundViolation };

struct EventReport {
    EventKind kind = EventKind::Completed;
    double t_event = 0.0;
    std::string detail;
};

const char* to_string(EventKind kind);

enum class InitialKind { Constant, CosineBump, GaussianBump };

/// Family of admissible initial data: positive, radial, zero slope at both
/// ends. CosineBump: base(1 + a cos(pi r/R)); GaussianBump: base(1 + a
/// exp(-r^2/width^2) cos^2(pi r/(2R))), the cosine-squared cutoff flattening
/// the profile at r = R.
struct InitialDataSpec {
    InitialKind kind = InitialKind::Constant;
    double base = 1.0;
    double amplitude = 0.0;  ///< in [0,1) so that u0 > 0
    double width = 0.25;     ///< Gaussian only
};

CellField make_initial_data(const InitialDataSpec& spec, const GridPtr& grid);

/// Face fluxes of the conservative form. At interior face i:
///   F_i = f_i^{n-1} [ ubar^p du / sqrt(ubar^2 + du^2)
///                     - chi ubar^q vr_i / sqrt(1 + vr_i^2) ],
/// ubar the arithmetic face mean, du the two-point difference quotient.
/// F_0 = F_N = 0 exactly (no-flux).
FaceField assemble_flux(const CellField& u, const EllipticFields& ef, const ModelParams& params);

/// du_i/dt = (F_{i+1} - F_i) / w_i; the weighted sum telescopes to zero, so
/// mass is conserved to rounding.
CellField rhs_flux_form(const State& state, const EllipticFields& ef, const ModelParams& params);

/// Expanded seven-term evaluator of u_t (verification-only; the integrator
/// never uses it). Pointwise in u, u_r, u_rr, v_r and the substitution
/// (mu - u) for v_rr + (n-1)/r v_r.
CellField rhs_expanded(const CellField& u, const CellField& u_r, const CellField& u_rr,
                       const EllipticFields& ef, const ModelParams& params);

/// Same, with u_r and u_rr from central stencils under homogeneous Neumann
/// ghosts (u_{-1} = u_0, u_N = u_{N-1}).
CellField rhs_expanded(const State& state, const EllipticFields& ef, const ModelParams& params);

/// Central-stencil derivatives with homogeneous Neumann ghost cells.
CellField neumann_derivative(const CellField& u, int order);

struct StepResult {
    State state;
    double dt_used = 0.0;
    std::optional<EventReport> event;  ///< DtUnderflow or PositivityLoss
};

/// One Heun step with dt = min(dt_max, cfl_diff h^2 / max D, cfl_adv h / max s),
/// D the effective diffusivity u^{p+2}/sqrt(u^2+u_r^2)^3 and
/// s = chi q u^{q-1} |v_r| / sqrt(1+v_r^2). Elliptic fields are recomputed at
/// both stages. dt_cap additionally caps dt (used to land on capture times).
StepResult step(const State& state, const ModelParams& params, const StepControl& control,
                double dt_cap = std::numeric_limits<double>::infinity());

struct StateTriple {
    State prev, mid, next;
};

/// Integrates from t = 0 and captures the states at t_center - delta,
/// t_center and t_center + delta exactly (dt is capped to land on them).
StateTriple sample_triple(const ModelParams& params, const InitialDataSpec& initial,
                          const GridSpec& grid, const StepControl& control, double t_center,
                          double delta);

struct RunResult {
    std::vector<DiagnosticsRecord> records;
    std::vector<State> snapshots;  ///< states at record times (if requested)
    State final_state;
    EventReport event;
    long steps = 0;
    double sup_max_u = 0.0;  ///< running sup over the whole run
    double inf_u0 = 0.0;
};

/// Integrates to T_end or the first event. Deterministic: a fixed config
/// yields a bitwise identical record stream.
RunResult run(const ModelParams& params, const InitialDataSpec& initial, const GridSpec& grid,
              const StepControl& control, double T_end, const DiagConfig& diag);

}  // namespace flc
