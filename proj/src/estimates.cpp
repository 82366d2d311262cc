#include "flc/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace flc {

const char* to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::GlobalBounded: return "GlobalBounded";
        case RegimeLabel::BlowUpKnown: return "BlowUpKnown";
        case RegimeLabel::Open: return "Open";
    }
    return "?";
}

double regime_threshold(double q, int n) { return q + 1.0 - 1.0 / n; }

RegimeLabel classify_regime(double p, double q, int n) {
    if (!(p >= 1.0) || !(q >= 1.0) || n < 1)
        throw std::invalid_argument("classify_regime: requires p >= 1, q >= 1, n >= 1");
    if (p > regime_threshold(q, n)) return RegimeLabel::GlobalBounded;
    if (p <= q) return RegimeLabel::BlowUpKnown;
    return RegimeLabel::Open;
}

double kappa(double chi, double mu, double sup_u, double q) {
    if (!(chi > 0.0) || !(mu > 0.0) || !(sup_u > 0.0) || !(q > 0.0))
        throw std::invalid_argument("kappa: all arguments must be > 0");
    return 2.0 * chi * mu * std::pow(sup_u, q - 1.0);
}

FloorCheck check_extinction_floor(std::span<const DiagnosticsRecord> trajectory, double inf_u0,
                                  double chi, double mu, double q, double tol_floor) {
    if (trajectory.empty())
        throw std::invalid_argument("check_extinction_floor: empty trajectory");
    double sup_u = 0.0;
    for (const auto& rec : trajectory) sup_u = std::max(sup_u, rec.max_u);

    FloorCheck fc;
    fc.kappa = kappa(chi, mu, sup_u, q);
    fc.floor_ratio_min = std::numeric_limits<double>::infinity();
    for (const auto& rec : trajectory) {
        const double floor = inf_u0 * std::exp(-fc.kappa * rec.t);
        fc.floor_ratio_min = std::min(fc.floor_ratio_min, rec.min_u / floor);
    }
    fc.satisfied = fc.floor_ratio_min >= 1.0 - tol_floor;
    return fc;
}

bool pointwise_kernel_check(double a, double b) {
    // tight as b/a -> 0, so the comparison carries a 4-ulp rounding allowance
    const double rhs = a * a / std::sqrt(a * a + b * b) + b;
    return a <= rhs + 4.0 * 2.220446049250313e-16 * (a + rhs);
}

double kernel_integral_gap(const CellField& u, double m) {
    const auto& g = *u.grid;
    const DerivedField ur = derivative_field(u, 1);
    double lhs = 0.0, rhs = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
        const double U = u.v[i];
        const double Ur = ur.values.v[i];
        const double w = g.volume_weight(i);
        lhs += w * std::pow(U, m - 1.0) * std::abs(Ur);
        rhs += w * (std::pow(U, m - 1.0) * Ur * Ur / std::sqrt(U * U + Ur * Ur) +
                    std::pow(U, m));
    }
    return rhs - lhs;
}

namespace {

CellField pow_field(const CellField& u, double m) {
    if (m == 1.0) return u;
    CellField out{u.grid, std::vector<double>(u.size())};
    for (int i = 0; i < u.size(); ++i) out.v[i] = std::pow(u.v[i], m);
    return out;
}

}  // namespace

EnergyResidual energy_identity_residual(const State& prev, const State& mid, const State& next,
                                        double m, const ModelParams& params) {
    if (!(m >= 1.0)) throw std::invalid_argument("energy_identity_residual: m must be >= 1");
    const double dt_f = next.t - mid.t;
    const double dt_b = mid.t - prev.t;
    if (std::abs(dt_f - dt_b) > 1e-9 * std::max(dt_f, dt_b))
        throw std::invalid_argument("energy_identity_residual: states not equispaced in time");

    const double ddt =
        (cell_integral(pow_field(next.u, m)) - cell_integral(pow_field(prev.u, m))) /
        (next.t - prev.t);

    const auto& g = *mid.u.grid;
    const CellField ur = neumann_derivative(mid.u, 1);
    const EllipticFields ef = solve_gradient(mid.u);
    const double mm1 = m * (m - 1.0);
    double diff_term = 0.0, chemo_term = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
        const double U = mid.u.v[i];
        const double Ur = ur.v[i];
        const double vr = ef.vr_cell.v[i];
        const double w = g.volume_weight(i);
        diff_term += w * std::pow(U, m + params.p - 2.0) * Ur * Ur / std::sqrt(U * U + Ur * Ur);
        chemo_term += w * std::pow(U, m + params.q - 2.0) * Ur * vr / std::sqrt(1.0 + vr * vr);
    }
    EnergyResidual er;
    er.residual = ddt + mm1 * diff_term - mm1 * params.chi * chemo_term;
    const double scale = std::max({1.0, std::abs(ddt), std::abs(mm1 * diff_term),
                                   std::abs(mm1 * params.chi * chemo_term)});
    er.relative = std::abs(er.residual) / scale;
    return er;
}

ResidualReport energy_identity_study(const ModelParams& params, const InitialDataSpec& initial,
                                     const GridSpec& coarse, const StepControl& control,
                                     double t_center, double delta, double m) {
    const StateTriple tc = sample_triple(params, initial, coarse, control, t_center, delta);
    const EnergyResidual rc = energy_identity_residual(tc.prev, tc.mid, tc.next, m, params);

    GridSpec fine = coarse;
    fine.cell_count *= 2;
    const StateTriple tf = sample_triple(params, initial, fine, control, t_center, delta / 2.0);
    const EnergyResidual rf = energy_identity_residual(tf.prev, tf.mid, tf.next, m, params);

    ResidualReport rep;
    rep.linf = std::abs(rf.residual);
    rep.l2 = std::abs(rf.residual);
    rep.observed_order = std::log2(std::abs(rc.residual) / std::abs(rf.residual));
    rep.interior_only = false;
    return rep;
}

double lm_norm(const CellField& u, double m) {
    if (!(m >= 1.0)) throw std::invalid_argument("lm_norm: m must be >= 1");
    for (int i = 0; i < u.size(); ++i)
        if (u.v[i] < 0.0) throw std::domain_error("lm_norm: negative u");
    const auto& g = *u.grid;
    double s = 0.0;
    for (int i = 0; i < u.size(); ++i) s += g.volume_weight(i) * std::pow(u.v[i], m);
    return std::pow(s, 1.0 / m);
}

GnQuotientReport gn_quotient(const CellField& u, double m, double alpha, double eta,
                             const ModelParams& params) {
    if (!(alpha > -m - params.p && alpha < -1.0 + 1.0 / params.n))
        throw std::invalid_argument("gn_quotient: alpha out of (-m-p, -1+1/n)");
    if (!(eta > 0.0)) throw std::invalid_argument("gn_quotient: eta must be > 0");

    const auto& g = *u.grid;
    GnQuotientReport rep;
    const CellField upow = pow_field(u, m + params.p - 1.0);
    const DerivedField grad = derivative_field(upow, 1);
    double grad_int = 0.0;
    for (int i = 0; i < g.cells(); ++i) {
        rep.lhs += g.volume_weight(i) * std::pow(u.v[i], m + params.p + alpha);
        grad_int += g.volume_weight(i) * std::abs(grad.values.v[i]);
    }
    rep.grad_term = eta * grad_int;
    const double expo = -params.n * (m + params.p + alpha - 1.0) /
                        (-params.n * alpha - params.n + 1.0);
    rep.implied_constant = std::pow(std::max(0.0, rep.lhs - rep.grad_term), 1.0 / m) /
                           std::pow(std::pow(eta, expo) + 1.0, 1.0 / m);
    return rep;
}

MoserResult moser_iterate(double M0, double b, int k, double p) {
    if (!(M0 >= 1.0)) throw std::invalid_argument("moser_iterate: M0 must be >= 1");
    if (!(b > 1.0)) throw std::invalid_argument("moser_iterate: b must be > 1");
    if (k < 1) throw std::invalid_argument("moser_iterate: k must be >= 1");
    const double two_k = std::ldexp(1.0, k);  // 2^k
    const double log_bound = 2.0 * two_k * std::log(b) + two_k * std::log(M0);
    MoserResult res;
    res.mk_bound = std::exp(log_bound);  // +inf once past the double range
    res.mk_root = std::exp(log_bound / (two_k + p - 1.0));
    return res;
}

}  // namespace flc
