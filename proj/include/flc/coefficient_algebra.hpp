#pragma once

#include <functional>

#include "flc/elliptic_field.hpp"
#include "flc/flux_dynamics.hpp"
#include "flc/model_params.hpp"
#include "flc/radial_grid.hpp"

namespace flc {

/// Which form of the coefficient displays to evaluate. Corrected makes
/// (P u_r) = 0 an exact identity and is the default everywhere; AsPrinted
/// keeps the uncorrected variant (four terms differ, as does the (A3~,A4~)
/// split) and exists as a documented negative control.
enum class CoefficientForm { Corrected, AsPrinted };

/// Coefficient bundles of the operators P and Q acting on u_r.
struct PQCoefficients {
    CellField A1, A2, a3, A3, A4;
    CellField Phi, Psi;
    CellField A3_tilde, A4_tilde;
};

/// The two candidate readings of the ambiguous z-evolution coefficients;
/// they differ in the B21 first-term denominator power and the B3 mixed-term
/// coefficient. Discriminated empirically by z_residual, never assumed.
enum class ZVariant { LemmaStatement, ProofDisplay };

const char* to_string(ZVariant v);

struct ZCoefficients {
    CellField B1, B21, B22, B3, B4;
    ZVariant variant = ZVariant::ProofDisplay;
};

/// Result of a residual evaluation; observed_order is log2(err_h / err_{h/2})
/// when the call ran a two-level study, NaN for a single level.
struct ResidualReport {
    double linf = 0.0;
    double l2 = 0.0;  ///< volume-weighted
    double observed_order = 0.0;
    bool interior_only = true;
};

/// Smooth radial profile with exact derivatives up to third order.
struct AnalyticProfile {
    std::function<double(double)> u, ur, urr, urrr;
};

/// a + b cos(pi r / R); positive when a > |b|.
AnalyticProfile cosine_profile(double a, double b, double R);

/// z = u_t / u with u_t from the expanded evaluator.
CellField z_field(const State& state, const EllipticFields& ef, const ModelParams& params);

PQCoefficients pq_coefficients(const CellField& u, const CellField& ur, const CellField& urr,
                               const EllipticFields& ef, const ModelParams& params,
                               CoefficientForm form = CoefficientForm::Corrected);

/// Residual of d/dr(rhs_expanded) against A1 u_rrr + A2 u_rr + a3 u_r^2 +
/// A3 u_r + A4 on two grid refinements; the report carries the fine-level
/// errors and the observed order. The identity is algebraic, so the residual
/// must vanish at second order for any smooth positive profile.
ResidualReport p_residual(const AnalyticProfile& profile, const ModelParams& params,
                          const GridSpec& coarse, const GridSpec& fine,
                          CoefficientForm form = CoefficientForm::Corrected);

/// Same with the (A3~, A4~) split of the operator Q.
ResidualReport q_residual(const AnalyticProfile& profile, const ModelParams& params,
                          const GridSpec& coarse, const GridSpec& fine,
                          CoefficientForm form = CoefficientForm::Corrected);

ZCoefficients z_coefficients(const State& state, const EllipticFields& ef,
                             const ModelParams& params, ZVariant variant);

/// Residual of the z-evolution display on one equispaced state triple:
/// z_t by centered time differencing, spatial derivatives by interior FD.
ResidualReport z_residual(const State& prev, const State& mid, const State& next,
                          const ModelParams& params, ZVariant variant);

/// Joint (h, dt) refinement study of z_residual: runs the given problem at
/// the base grid and at double resolution, sampling triples around t_center
/// with spacing delta (halved along with h), and reports the fine-level
/// errors plus observed order.
ResidualReport z_residual_study(const ModelParams& params, const InitialDataSpec& initial,
                                const GridSpec& coarse, const StepControl& control,
                                double t_center, double delta, ZVariant variant);

}  // namespace flc
