#include "flc/coefficient_algebra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace flc {

const char* to_string(ZVariant v) {
    return v == ZVariant::LemmaStatement ? "LemmaStatement" : "ProofDisplay";
}

AnalyticProfile cosine_profile(double a, double b, double R) {
    const double k = M_PI / R;
    return AnalyticProfile{
        [=](double r) { return a + b * std::cos(k * r); },
        [=](double r) { return -b * k * std::sin(k * r); },
        [=](double r) { return -b * k * k * std::cos(k * r); },
        [=](double r) { return b * k * k * k * std::sin(k * r); },
    };
}

CellField z_field(const State& state, const EllipticFields& ef, const ModelParams& params) {
    const CellField ut = rhs_expanded(state, ef, params);
    CellField z{state.u.grid, std::vector<double>(state.u.size())};
    for (int i = 0; i < state.u.size(); ++i) z.v[i] = ut.v[i] / state.u.v[i];
    return z;
}

PQCoefficients pq_coefficients(const CellField& u, const CellField& ur, const CellField& urr,
                               const EllipticFields& ef, const ModelParams& params,
                               CoefficientForm form) {
    const auto& g = *u.grid;
    const int N = g.cells();
    const int n = g.n();
    const double p = params.p, q = params.q, chi = params.chi;
    const double mu = ef.mu;
    const bool printed = form == CoefficientForm::AsPrinted;

    PQCoefficients co;
    for (CellField* f : {&co.A1, &co.A2, &co.a3, &co.A3, &co.A4, &co.Phi, &co.Psi, &co.A3_tilde,
                         &co.A4_tilde})
        *f = CellField{u.grid, std::vector<double>(N)};

    for (int i = 0; i < N; ++i) {
        const double U = u.v[i];
        if (!(U > 0.0))
            throw std::domain_error("pq_coefficients: nonpositive u at cell " + std::to_string(i));
        const double Ur = ur.v[i];
        const double Urr = urr.v[i];
        const double vr = ef.vr_cell.v[i];
        const double vrr = ef.vrr_cell.v[i];
        const double r = g.cell_center(i);

        const double S = std::sqrt(U * U + Ur * Ur);
        const double S3 = S * S * S;
        const double S5 = S3 * S * S;
        const double W = std::sqrt(1.0 + vr * vr);
        const double W3 = W * W * W;
        const double W5 = W3 * W * W;
        const double ur2 = Ur * Ur;
        const double ur3 = ur2 * Ur;
        const double ur4 = ur2 * ur2;
        const double ur5 = ur4 * Ur;

        co.A1.v[i] = std::pow(U, p + 2) / S3;

        // A2: the uncorrected form carries a stray u_r in the chemotaxis term.
        const double a2_chemo = printed ? -q * chi * std::pow(U, q - 1) * Ur * vr / W
                                        : -q * chi * std::pow(U, q - 1) * vr / W;
        co.A2.v[i] = (p + 2) * std::pow(U, p + 1) * ur3 / S5
                   - 3.0 * std::pow(U, p + 2) * Ur * Urr / S5
                   + (p - 1) * std::pow(U, p + 3) * Ur / S5
                   + 4.0 * p * std::pow(U, p + 1) * ur3 / S5
                   + p * std::pow(U, p - 1) * ur5 / S5
                   + (n - 1) / r * std::pow(U, p + 2) / S3
                   + (p - 1) * std::pow(U, p + 1) * Ur * (2.0 * U * U - ur2) / S5
                   + a2_chemo;

        co.a3.v[i] = p * (p - 1) * std::pow(U, p - 2) * ur5 / S5
                   - q * (q - 1) * chi * std::pow(U, q - 2) * vr / W;

        // Phi: the uncorrected form is one power of u_r short in the first two
        // terms and has denominator power 3 instead of 1 in the first v_rr term.
        const double phi1 = (p - 1) * (p - 2) * std::pow(U, p + 2) * (printed ? Ur : ur2) / S5;
        const double phi2 = (p - 1) * (p + 1) * std::pow(U, p) * (printed ? ur3 : ur4) / S5;
        const double phi5 = -q * chi * std::pow(U, q - 1) * vrr / (printed ? W3 : W);
        co.Phi.v[i] = phi1 + phi2
                    - q * chi * mu * std::pow(U, q - 1) / W3
                    + (q + 1) * chi * std::pow(U, q) / W3
                    + phi5
                    + q * chi * std::pow(U, q - 1) * vr * vr * vrr / W3
                    - q * chi * (n - 1) / r * std::pow(U, q - 1) * vr * vr * vr / W3;

        co.Psi.v[i] = (p - 1) * (n - 1) / r * std::pow(U, p + 1) * ur2 / S3
                    + 3.0 * chi * mu * std::pow(U, q) * vr * vrr / W5
                    - 3.0 * chi * std::pow(U, q + 1) * vr * vrr / W5
                    + chi * (n - 1) / (r * r) * std::pow(U, q) * vr * vr * vr / W3
                    - 3.0 * chi * (n - 1) / r * std::pow(U, q) * vr * vr * vrr / W5;

        const double h3 = p * (p - 4) * std::pow(U, p) * ur4 / S5
                        - (n - 1) / (r * r) * std::pow(U, p) / S;
        const double g3 = p * (n - 1) / r * std::pow(U, p - 1) * ur3 / S3;

        co.A3.v[i] = h3 + co.Phi.v[i];
        co.A4.v[i] = g3 * Ur + co.Psi.v[i];
        co.A3_tilde.v[i] = g3 + co.Phi.v[i];
        // The corrected split moves h3 into A4~ multiplied by u_r, so that
        // A3~ u_r + A4~ regroups A3 u_r + A4 exactly; the uncorrected split
        // keeps h3 unmultiplied, which breaks (Q u_r) = 0.
        co.A4_tilde.v[i] = (printed ? h3 : h3 * Ur) + co.Psi.v[i];
    }
    return co;
}

namespace {

struct LevelErrors {
    double linf = 0.0;
    double l2 = 0.0;
};

LevelErrors pq_residual_level(const AnalyticProfile& profile, const ModelParams& params,
                              const GridSpec& grid, bool q_split, CoefficientForm form) {
    GridSpec gs = grid;
    gs.dimension = params.n;
    gs.radius = params.R;
    const GridPtr g = build_grid(gs);

    const CellField u = sample_cells(g, profile.u);
    const CellField ur = sample_cells(g, profile.ur);
    const CellField urr = sample_cells(g, profile.urr);
    const CellField urrr = sample_cells(g, profile.urrr);

    const EllipticFields ef = solve_gradient(u);
    const CellField rhs = rhs_expanded(u, ur, urr, ef, params);
    const DerivedField drhs = derivative_field(rhs, 1);
    const PQCoefficients co = pq_coefficients(u, ur, urr, ef, params, form);

    LevelErrors e;
    double l2acc = 0.0;
    for (int i = 0; i < g->cells(); ++i) {
        if (!drhs.is_interior(i)) continue;
        const double opsum =
            q_split ? co.A1.v[i] * urrr.v[i] + co.A2.v[i] * urr.v[i] +
                          co.a3.v[i] * ur.v[i] * ur.v[i] + co.A3_tilde.v[i] * ur.v[i] +
                          co.A4_tilde.v[i]
                    : co.A1.v[i] * urrr.v[i] + co.A2.v[i] * urr.v[i] +
                          co.a3.v[i] * ur.v[i] * ur.v[i] + co.A3.v[i] * ur.v[i] + co.A4.v[i];
        const double res = drhs.values.v[i] - opsum;
        e.linf = std::max(e.linf, std::abs(res));
        l2acc += g->volume_weight(i) * res * res;
    }
    e.l2 = std::sqrt(l2acc);
    return e;
}

ResidualReport pq_residual_study(const AnalyticProfile& profile, const ModelParams& params,
                                 const GridSpec& coarse, const GridSpec& fine, bool q_split,
                                 CoefficientForm form) {
    const LevelErrors ec = pq_residual_level(profile, params, coarse, q_split, form);
    const LevelErrors ef_ = pq_residual_level(profile, params, fine, q_split, form);
    ResidualReport rep;
    rep.linf = ef_.linf;
    rep.l2 = ef_.l2;
    rep.observed_order = std::log2(ec.linf / ef_.linf);
    rep.interior_only = true;
    return rep;
}

}  // namespace

ResidualReport p_residual(const AnalyticProfile& profile, const ModelParams& params,
                          const GridSpec& coarse, const GridSpec& fine, CoefficientForm form) {
    return pq_residual_study(profile, params, coarse, fine, false, form);
}

ResidualReport q_residual(const AnalyticProfile& profile, const ModelParams& params,
                          const GridSpec& coarse, const GridSpec& fine, CoefficientForm form) {
    return pq_residual_study(profile, params, coarse, fine, true, form);
}

ZCoefficients z_coefficients(const State& state, const EllipticFields& ef,
                             const ModelParams& params, ZVariant variant) {
    const auto& g = *state.u.grid;
    const int N = g.cells();
    const int n = g.n();
    const double p = params.p, q = params.q, chi = params.chi;
    const double mu = ef.mu;
    const bool proof = variant == ZVariant::ProofDisplay;

    const CellField urf = neumann_derivative(state.u, 1);
    const CellField urrf = neumann_derivative(state.u, 2);

    ZCoefficients co;
    co.variant = variant;
    for (CellField* f : {&co.B1, &co.B21, &co.B22, &co.B3, &co.B4})
        *f = CellField{state.u.grid, std::vector<double>(N)};

    for (int i = 0; i < N; ++i) {
        const double U = state.u.v[i];
        if (!(U > 0.0))
            throw std::domain_error("z_coefficients: nonpositive u at cell " + std::to_string(i));
        const double Ur = urf.v[i];
        const double Urr = urrf.v[i];
        const double vr = ef.vr_cell.v[i];
        const double r = g.cell_center(i);

        const double S = std::sqrt(U * U + Ur * Ur);
        const double S3 = S * S * S;
        const double S5 = S3 * S * S;
        const double W2 = 1.0 + vr * vr;
        const double W = std::sqrt(W2);
        const double W3 = W * W2;
        const double W5 = W3 * W2;
        const double ur2 = Ur * Ur;
        const double ur3 = ur2 * Ur;
        const double ur5 = ur3 * ur2;

        co.B1.v[i] = std::pow(U, p + 2) / S3;
        co.B22.v[i] = (n - 1) * co.B1.v[i];

        // One reading has the first term over sqrt(u^2+u_r^2) (power 1), the
        // other over power 3; z_residual picks the survivor.
        const double b21_first = 2.0 * std::pow(U, p + 1) * Ur / (proof ? S3 : S);
        co.B21.v[i] = b21_first
                    - 3.0 * std::pow(U, p + 2) * Ur * Urr / S5
                    + 4.0 * p * std::pow(U, p - 1) * ur3 / S3
                    - 3.0 * p * std::pow(U, p - 1) * ur5 / S5
                    + (p - 1) * std::pow(U, p + 1) * Ur * (2.0 * U * U - ur2) / S5
                    - chi * std::pow(U, q - 1) * vr / W;

        const double mixed_coeff = proof ? (p * q - 2.0 * q + 1.0) : (p * q - 2.0 * q - 1.0);
        co.B3.v[i] = chi * std::pow(U, q) / W3
                   + (p - q) * chi * std::pow(U, q - 1) / W3 *
                         (mu - U + (n - 1) / r * vr * vr * vr)
                   + mixed_coeff * chi * std::pow(U, q - 2) * Ur * vr / W;

        co.B4.v[i] = -3.0 * chi * std::pow(U, p + q - 1) * (mu - U) * Ur * vr / (S * W5)
                   + 3.0 * chi * chi * std::pow(U, 2 * q - 1) * (mu - U) * vr * vr / (W2 * W2 * W2)
                   + chi * std::pow(U, p + q - 2) * ur2 / (S * W3)
                   - chi * chi * std::pow(U, 2 * q - 2) * Ur * vr / (W2 * W2)
                   + 3.0 * chi * (n - 1) / r * std::pow(U, p + q - 1) * Ur * vr * vr / (S * W5)
                   - 3.0 * chi * chi * (n - 1) / r * std::pow(U, 2 * q - 1) * vr * vr * vr /
                         (W2 * W2 * W2);
    }
    return co;
}

ResidualReport z_residual(const State& prev, const State& mid, const State& next,
                          const ModelParams& params, ZVariant variant) {
    const double dt_f = next.t - mid.t;
    const double dt_b = mid.t - prev.t;
    if (std::abs(dt_f - dt_b) > 1e-9 * std::max(dt_f, dt_b))
        throw std::invalid_argument("z_residual: states not equispaced in time");

    const EllipticFields ef_prev = solve_gradient(prev.u);
    const EllipticFields ef_mid = solve_gradient(mid.u);
    const EllipticFields ef_next = solve_gradient(next.u);

    const CellField z_prev = z_field(prev, ef_prev, params);
    const CellField z_mid = z_field(mid, ef_mid, params);
    const CellField z_next = z_field(next, ef_next, params);

    const DerivedField zr = derivative_field(z_mid, 1);
    const DerivedField zrr = derivative_field(z_mid, 2);
    const ZCoefficients co = z_coefficients(mid, ef_mid, params, variant);

    const auto& g = *mid.u.grid;
    const int margin = 3;  // FD stencils plus one ghost-derivative cell
    ResidualReport rep;
    rep.observed_order = std::numeric_limits<double>::quiet_NaN();
    double l2acc = 0.0;
    for (int i = margin; i < g.cells() - margin; ++i) {
        const double zt = (z_next.v[i] - z_prev.v[i]) / (next.t - prev.t);
        const double z = z_mid.v[i];
        const double rhs = co.B1.v[i] * zrr.values.v[i] +
                           (co.B21.v[i] + co.B22.v[i] / g.cell_center(i)) * zr.values.v[i] +
                           (params.p - 1.0) * z * z + co.B3.v[i] * z + co.B4.v[i];
        const double res = zt - rhs;
        rep.linf = std::max(rep.linf, std::abs(res));
        l2acc += g.volume_weight(i) * res * res;
    }
    rep.l2 = std::sqrt(l2acc);
    return rep;
}

ResidualReport z_residual_study(const ModelParams& params, const InitialDataSpec& initial,
                                const GridSpec& coarse, const StepControl& control,
                                double t_center, double delta, ZVariant variant) {
    const StateTriple tc = sample_triple(params, initial, coarse, control, t_center, delta);
    const ResidualReport rc = z_residual(tc.prev, tc.mid, tc.next, params, variant);

    GridSpec fine = coarse;
    fine.cell_count *= 2;
    const StateTriple tf = sample_triple(params, initial, fine, control, t_center, delta / 2.0);
    ResidualReport rf = z_residual(tf.prev, tf.mid, tf.next, params, variant);
    rf.observed_order = std::log2(rc.linf / rf.linf);
    return rf;
}

}  // namespace flc
