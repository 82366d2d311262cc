#include "flc/elliptic_field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace flc {

namespace {

// integer powers by repeated multiplication; solve_gradient sits in the
// integrator's inner loop
double int_pow(double x, int n) {
    if (n < 0) return 1.0 / int_pow(x, -n);
    double acc = 1.0;
    for (int k = 0; k < n; ++k) acc *= x;
    return acc;
}

}  // namespace

void validate(const ModelParams& params) {
    if (!(params.p >= 1.0)) throw std::invalid_argument("params.p: must be >= 1");
    if (!(params.q >= 1.0)) throw std::invalid_argument("params.q: must be >= 1");
    if (!(params.chi > 0.0)) throw std::invalid_argument("params.chi: must be > 0");
    if (params.n < 1) throw std::invalid_argument("params.n: must be >= 1");
    if (!(params.R > 0.0)) throw std::invalid_argument("params.R: must be > 0");
}

double compute_mu(const CellField& u) {
    const auto& g = *u.grid;
    return static_cast<double>(g.n()) * int_pow(g.radius(), -g.n()) * cell_integral(u);
}

EllipticFields solve_gradient(const CellField& u) {
    const auto& g = *u.grid;
    const int N = g.cells();
    const int n = g.n();

    EllipticFields ef;
    ef.mu = compute_mu(u);
    ef.vr_face = FaceField{u.grid, std::vector<double>(N + 1)};
    ef.vr_cell = CellField{u.grid, std::vector<double>(N)};
    ef.vrr_cell = CellField{u.grid, std::vector<double>(N)};

    const FaceField cum = cumulative_integral(u);

    ef.vr_face.v[0] = 0.0;  // r^{1-n} I(r) -> 0 as r -> 0 for any n >= 1
    for (int i = 1; i <= N; ++i) {
        const double f = g.face_radius(i);
        ef.vr_face.v[i] = ef.mu * f / n - int_pow(f, 1 - n) * cum.v[i];
    }
    for (int i = 0; i < N; ++i)
        ef.vr_cell.v[i] = 0.5 * (ef.vr_face.v[i] + ef.vr_face.v[i + 1]);

    for (int i = 0; i < N; ++i) {
        const double r = g.cell_center(i);
        // cumulative integral extended from face i to the cell center by a
        // half-cell of the same quadrature: I(r_i) ~ I(f_i) + u_i (r_i^n - f_i^n)/n
        const double fi = g.face_radius(i);
        const double cum_center =
            cum.v[i] + u.v[i] * (int_pow(r, n) - int_pow(fi, n)) / n;
        ef.vrr_cell.v[i] = ef.mu / n - u.v[i] + (n - 1) * int_pow(r, -n) * cum_center;
    }
    return ef;
}

CellField compute_vrt(const CellField& u, const CellField& u_r, const EllipticFields& ef,
                      const ModelParams& params) {
    const int N = u.size();
    CellField out{u.grid, std::vector<double>(N)};
    for (int i = 0; i < N; ++i) {
        const double ui = u.v[i];
        if (!(ui > 0.0))
            throw std::domain_error("compute_vrt: nonpositive u at cell " + std::to_string(i));
        const double ur = u_r.v[i];
        const double vr = ef.vr_cell.v[i];
        out.v[i] = -std::pow(ui, params.p) * ur / std::sqrt(ui * ui + ur * ur) +
                   params.chi * std::pow(ui, params.q) * vr / std::sqrt(1.0 + vr * vr);
    }
    return out;
}

BoundReport check_vr_bounds(const CellField& u, const EllipticFields& ef, double sup_u,
                            double tol_bound) {
    const auto& g = *u.grid;
    const int N = g.cells();
    const int n = g.n();
    for (int i = 0; i < N; ++i)
        if (u.v[i] < 0.0)
            throw std::domain_error("check_vr_bounds: negative u at cell " + std::to_string(i) +
                                    " (bounds proven for nonnegative u only)");

    const double muRn = ef.mu * int_pow(g.radius(), n) / n;
    BoundReport rep;
    rep.vr_upper_margin = rep.vr_lower_margin = rep.vr_linfty_margin = rep.vrr_margin =
        std::numeric_limits<double>::infinity();
    // the v_r bounds hold for the face values as exact discrete inequalities
    // (the cumulative integral is nonnegative and monotone); face-averaged
    // cell values can undershoot them near kinks, so margins are taken over
    // the interior faces
    for (int i = 1; i <= N; ++i) {
        const double f = g.face_radius(i);
        const double vr = ef.vr_face.v[i];
        rep.vr_upper_margin = std::min(rep.vr_upper_margin, ef.mu * f / n - vr);
        rep.vr_lower_margin = std::min(rep.vr_lower_margin, vr + muRn * int_pow(f, 1 - n));
        rep.vr_linfty_margin = std::min(rep.vr_linfty_margin, sup_u * f / n - std::abs(vr));
    }
    for (int i = 0; i < N; ++i)
        rep.vrr_margin = std::min(rep.vrr_margin, sup_u - std::abs(ef.vrr_cell.v[i]));
    const double tol = tol_bound * std::max(1.0, sup_u);
    rep.all_satisfied = rep.vr_upper_margin >= -tol && rep.vr_lower_margin >= -tol &&
                        rep.vr_linfty_margin >= -tol && rep.vrr_margin >= -tol;
    return rep;
}

}  // namespace flc
