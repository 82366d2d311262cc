#pragma once

#include "flc/model_params.hpp"
#include "flc/radial_grid.hpp"

namespace flc {

/// Fields slaved to u through the elliptic equation 0 = dv - mu + u, computed
/// from the explicit radial formulas
///   v_r(r)  = mu r/n - r^{1-n} I(r),      I(r) = int_0^r rho^{n-1} u drho,
///   v_rr(r) = mu/n - u + (n-1) r^{-n} I(r).
/// v itself is never materialized; nothing downstream needs it.
struct EllipticFields {
    double mu = 0.0;     ///< spatial average n R^{-n} int u rho^{n-1} drho
    FaceField vr_face;   ///< v_r at faces; exactly 0 at face 0, ~0 at face N
    CellField vr_cell;   ///< arithmetic average of the adjacent face values
    CellField vrr_cell;
};

/// Margins of the pointwise bounds on v_r and v_rr. A margin is
/// the minimum of (bound - quantity); nonnegative means satisfied. The v_r
/// margins are taken over faces, where the bounds are exact discrete
/// inequalities for any u >= 0; the v_rr margin over cells.
struct BoundReport {
    double vr_upper_margin = 0.0;   ///< min of mu f/n - v_r over faces
    double vr_lower_margin = 0.0;   ///< min of v_r + mu R^n/n f^{1-n} over faces
    double vr_linfty_margin = 0.0;  ///< min of sup_u f/n - |v_r| over faces
    double vrr_margin = 0.0;        ///< min of sup_u - |v_rr| over cells
    bool all_satisfied = false;
};

/// mu = n R^{-n} * cell_integral(u).
double compute_mu(const CellField& u);

/// Exact elliptic solve by cumulative integration. Linear in u.
EllipticFields solve_gradient(const CellField& u);

/// v_rt = -u^p u_r / sqrt(u^2+u_r^2) + chi u^q v_r / sqrt(1+v_r^2), pointwise
/// at cells. Requires u > 0 everywhere; the first offending cell is reported.
CellField compute_vrt(const CellField& u, const CellField& u_r, const EllipticFields& ef,
                      const ModelParams& params);

/// Checks the pointwise bounds on v_r and v_rr for nonnegative u. The margins
/// are compared against -tol_bound * max(1, sup_u). Negative u is a distinct
/// error (the bounds are proven for nonnegative solutions only).
BoundReport check_vr_bounds(const CellField& u, const EllipticFields& ef, double sup_u,
                            double tol_bound = 1e-10);

}  // namespace flc
