#pragma once

#include <span>

#include "flc/coefficient_algebra.hpp"
#include "flc/diagnostics.hpp"
#include "flc/flux_dynamics.hpp"
#include "flc/model_params.hpp"
#include "flc/radial_grid.hpp"

namespace flc {

/// Three-way split of the (p, q, n) quadrant: proven global boundedness for
/// p > q+1-1/n, known blow-up examples for p <= q, open in between. The
/// boundary p = q+1-1/n maps to Open (boundedness needs strict inequality).
enum class RegimeLabel { GlobalBounded, BlowUpKnown, Open };

const char* to_string(RegimeLabel label);

RegimeLabel classify_regime(double p, double q, int n);

/// The threshold value q + 1 - 1/n.
double regime_threshold(double q, int n);

/// kappa = 2 chi mu sup_u^{q-1}.
double kappa(double chi, double mu, double sup_u, double q);

struct FloorCheck {
    double kappa = 0.0;
    double floor_ratio_min = 0.0;  ///< min over records of min_u / (inf u0 e^{-kappa t})
    bool satisfied = false;        ///< floor_ratio_min >= 1 - tol_floor
};

/// Extinction-floor check over a recorded trajectory; kappa is recomputed a
/// posteriori from the running sup of max_u over the whole trajectory.
FloorCheck check_extinction_floor(std::span<const DiagnosticsRecord> trajectory, double inf_u0,
                                  double chi, double mu, double q, double tol_floor = 0.01);

/// Pointwise kernel inequality a <= a^2/sqrt(a^2+b^2) + b for a >= 0, b > 0.
/// The inequality is tight as b/a -> 0; the FP comparison allows 4 ulps.
bool pointwise_kernel_check(double a, double b);

/// Integrated form of the kernel comparison on a cell field with u > 0 and
/// gradient from interior FD: returns rhs - lhs of
/// int u^{m-1}|u_r| <= int u^{m-1} u_r^2/sqrt(u^2+u_r^2) + int u^m.
double kernel_integral_gap(const CellField& u, double m);

/// Signed residual of the exact energy identity
///   d/dt int u^m + m(m-1) int u^{m+p-2} u_r^2 / sqrt(u^2+u_r^2)
///     = m(m-1) chi int u^{m+q-2} u_r v_r / sqrt(1+v_r^2),
/// integrals with r^{n-1} weights, d/dt by centered differencing over an
/// equispaced state triple. At m = 1 the identity degenerates to mass
/// conservation and the residual is the centered mass derivative bit for bit.
struct EnergyResidual {
    double residual = 0.0;
    double relative = 0.0;  ///< residual scaled by max(1, |d/dt| term scale)
};

EnergyResidual energy_identity_residual(const State& prev, const State& mid, const State& next,
                                        double m, const ModelParams& params);

/// Joint (h, dt) refinement study of the energy identity residual.
ResidualReport energy_identity_study(const ModelParams& params, const InitialDataSpec& initial,
                                     const GridSpec& coarse, const StepControl& control,
                                     double t_center, double delta, double m);

/// (Sum w_i u_i^m)^{1/m}; requires u >= 0 and m >= 1.
double lm_norm(const CellField& u, double m);

struct GnQuotientReport {
    double lhs = 0.0;               ///< int u^{m+p+alpha}
    double grad_term = 0.0;         ///< eta int |(u^{m+p-1})_r| r^{n-1} dr
    double implied_constant = 0.0;  ///< max(0, lhs-grad)^{1/m} / (eta^{expo}+1)^{1/m}
};

/// Diagnostic for the interpolation inequality; alpha must lie in
/// (-m-p, -1+1/n). The constant C in the inequality is not explicit, so this
/// observes stability of the implied constant rather than certifying a value.
GnQuotientReport gn_quotient(const CellField& u, double m, double alpha, double eta,
                             const ModelParams& params);

struct MoserResult {
    double mk_bound = 0.0;  ///< b^{2^{k+1}} M0^{2^k}; +inf once it overflows
    double mk_root = 0.0;   ///< mk_bound^{1/(2^k+p-1)}, evaluated in log space
};

/// Moser recursion bound with m_k = 2^k + (p-1); mk_root converges to b^2 M0.
MoserResult moser_iterate(double M0, double b, int k, double p);

}  // namespace flc
