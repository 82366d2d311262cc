#include "flc/verify.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "flc/coefficient_algebra.hpp"
#include "flc/comparison_functions.hpp"
#include "flc/estimates.hpp"
#include "flc/flux_dynamics.hpp"
#include "flc/harness.hpp"

namespace flc {

namespace {

ModelParams params_of(double p, double q, int n, double chi = 1.0) {
    ModelParams mp;
    mp.p = p;
    mp.q = q;
    mp.chi = chi;
    mp.n = n;
    mp.R = 1.0;
    return mp;
}

std::string pq_tag(double p, double q) {
    return "p=" + format_double(p) + " q=" + format_double(q);
}

/// Three-level refinement: errors must decrease and the fine-pair order meets
/// the gate.
VerifyRow pq_row(const std::string& name, bool q_split, double p, double q,
                 CoefficientForm form, bool expected_pass) {
    const ModelParams mp = params_of(p, q, 2);
    const AnalyticProfile prof = cosine_profile(1.0, 0.1, mp.R);
    GridSpec g128{2, 1.0, 128}, g256{2, 1.0, 256}, g512{2, 1.0, 512};
    const ResidualReport lo = q_split ? q_residual(prof, mp, g128, g256, form)
                                      : p_residual(prof, mp, g128, g256, form);
    const ResidualReport hi = q_split ? q_residual(prof, mp, g256, g512, form)
                                      : p_residual(prof, mp, g256, g512, form);
    VerifyRow row;
    row.name = name + " " + pq_tag(p, q);
    row.variant = form == CoefficientForm::Corrected ? "corrected" : "as-printed";
    row.linf = hi.linf;
    row.observed_order = hi.observed_order;
    row.pass = lo.observed_order > 0.0 && hi.observed_order >= 1.8;
    row.expected_pass = expected_pass;
    return row;
}

VerifyRow split_identity_row() {
    // A3 u_r + A4 == A3~ u_r + A4~ on random positive fields, compared at
    // operand scale.
    std::mt19937 rng(20240811u);
    std::uniform_real_distribution<double> du(0.3, 2.5), dr(-1.0, 1.0);
    double worst = 0.0;
    const GridPtr g = build_grid(GridSpec{2, 1.0, 64});
    for (int trial = 0; trial < 25; ++trial) {
        CellField u{g, std::vector<double>(64)}, ur{g, std::vector<double>(64)},
            urr{g, std::vector<double>(64)};
        for (int i = 0; i < 64; ++i) {
            u.v[i] = du(rng);
            ur.v[i] = dr(rng);
            urr.v[i] = dr(rng);
        }
        const ModelParams mp = params_of(1.0 + du(rng), 1.0 + du(rng), 2, du(rng));
        const EllipticFields ef = solve_gradient(u);
        const PQCoefficients co = pq_coefficients(u, ur, urr, ef, mp);
        for (int i = 0; i < 64; ++i) {
            const double lhs = co.A3.v[i] * ur.v[i] + co.A4.v[i];
            const double rhs = co.A3_tilde.v[i] * ur.v[i] + co.A4_tilde.v[i];
            // ulps of the largest participating term; the regrouped sums can
            // cancel far below the atoms they are assembled from
            const double scale =
                std::max({1e-300, std::abs(co.A3.v[i] * ur.v[i]), std::abs(co.A4.v[i]),
                          std::abs(co.A3_tilde.v[i] * ur.v[i]), std::abs(co.A4_tilde.v[i]),
                          std::abs(co.Phi.v[i] * ur.v[i]), std::abs(co.Psi.v[i])});
            worst = std::max(worst, std::abs(lhs - rhs) / (scale * 2.220446049250313e-16));
        }
    }
    VerifyRow row;
    row.name = "split identity A3*ur+A4 = A3~*ur+A4~";
    row.variant = "corrected";
    row.linf = worst;  // in ulp units of the operand scale
    row.observed_order = 0.0;
    row.pass = worst <= 8.0;
    return row;
}

StepControl fine_control() {
    StepControl c;
    c.dt_max = 1e-3;
    return c;
}

VerifyRow z_row(ZVariant variant, bool expected_pass) {
    const ModelParams mp = params_of(2.0, 1.0, 2);
    InitialDataSpec init{InitialKind::CosineBump, 1.0, 0.4, 0.25};
    const GridSpec coarse{2, 1.0, 48};
    const ResidualReport rep =
        z_residual_study(mp, init, coarse, fine_control(), 0.05, 0.005, variant);
    VerifyRow row;
    row.name = "z-evolution residual (joint h,dt refinement)";
    row.variant = to_string(variant);
    row.linf = rep.linf;
    row.observed_order = rep.observed_order;
    row.pass = rep.observed_order >= 1.5;
    row.expected_pass = expected_pass;
    return row;
}

VerifyRow z_steady_row() {
    const ModelParams mp = params_of(2.0, 1.0, 2);
    InitialDataSpec init{InitialKind::Constant, 1.0, 0.0, 0.25};
    const StateTriple tr =
        sample_triple(mp, init, GridSpec{2, 1.0, 48}, fine_control(), 0.05, 0.005);
    const ResidualReport rep = z_residual(tr.prev, tr.mid, tr.next, mp, ZVariant::ProofDisplay);
    VerifyRow row;
    row.name = "z-evolution steady state";
    row.variant = "ProofDisplay";
    row.linf = rep.linf;
    row.observed_order = 0.0;
    row.pass = rep.linf <= 1e-12;
    return row;
}

RiccatiSpec random_riccati(std::mt19937& rng) {
    std::uniform_real_distribution<double> d(0.2, 3.0);
    for (;;) {
        RiccatiSpec s;
        s.C1 = d(rng);
        s.C2 = d(rng);
        s.C3 = d(rng);
        s.C4 = d(rng);
        const double disc = s.C3 * s.C3 - 4.0 * s.C2 * s.C4;
        if (!(disc > 1e-4)) continue;
        const double sc = std::sqrt(disc / (4.0 * s.C2 * s.C2));
        s.M = sc + d(rng);
        return s;
    }
}

VerifyRow riccati_population_row() {
    std::mt19937 rng(77u);
    double worst_resid = 0.0, worst_root = 0.0;
    for (int k = 0; k < 100; ++k) {
        const RiccatiSpec s = random_riccati(rng);
        const double t1 = riccati_root_time(s);
        worst_root = std::max(worst_root, std::abs(riccati_g(s, t1)) / std::max(1.0, s.M));
        const double scale = 1e-10 * std::max(1.0, s.M * s.M * s.C2);
        for (int j = 0; j < 20; ++j) {
            const double t = t1 * j / 19.0;
            worst_resid = std::max(worst_resid, std::abs(riccati_residual(s, t)) / scale);
        }
    }
    VerifyRow row;
    row.name = "riccati ODE residual, 100 specs x 20 times";
    row.variant = "corrected";
    row.linf = worst_resid;  // in units of 1e-10 max(1, M^2 C2)
    row.pass = worst_resid <= 1.0 && worst_root <= 1e-10;
    return row;
}

VerifyRow riccati_example_row() {
    const RiccatiSpec s{1.0, 1.0, 3.0, 2.0, 1.5};
    const double t1 = riccati_root_time(s);
    const double g0 = riccati_g(s, 0.0);
    const double expect_t1 = std::log(10.0 / 7.0);
    VerifyRow row;
    row.name = "riccati worked example (1,1,3,2,M=1.5)";
    row.variant = "corrected";
    row.linf = std::max({std::abs(g0 - 1.5), std::abs(t1 - expect_t1),
                         std::abs(riccati_g(s, t1))});
    row.pass = std::abs(g0 - 1.5) <= 1e-12 && std::abs(t1 - expect_t1) <= 1e-12 &&
               std::abs(riccati_g(s, t1)) <= 1e-12;
    return row;
}

VerifyRow riccati_printed_row() {
    std::mt19937 rng(78u);
    double worst = 1e300;
    for (int k = 0; k < 20; ++k) {
        const RiccatiSpec s = random_riccati(rng);
        // the printed middle term -C3/(2 C3) breaks the ODE at t = 0
        worst = std::min(worst, std::abs(riccati_residual_printed(s, 0.0)));
    }
    VerifyRow row;
    row.name = "riccati printed -C3/(2C3) variant";
    row.variant = "as-printed";
    row.linf = worst;  // smallest observed residual; must stay far from zero
    row.pass = worst <= 1e-10;
    row.expected_pass = false;
    return row;
}

VerifyRow tangent_row(CompDirection dir) {
    std::mt19937 rng(dir == CompDirection::Lower ? 101u : 102u);
    std::uniform_real_distribution<double> d(0.2, 2.0);
    // D chosen so the sampled branch (n=1, j=0) stays pole-free: the tan
    // argument moves by pi/6 over a branch, so |atan(D/sqrt(C~))| < pi/3
    // keeps it inside (-pi/2, pi/2).
    std::uniform_real_distribution<double> dD(-1.6, 3.0);
    double worst = 0.0;
    bool monotone_ok = true;
    for (int k = 0; k < 100; ++k) {
        TangentCompSpec s;
        s.direction = dir;
        s.c4t = d(rng);
        s.c5t = d(rng);
        s.c6t = (s.c5t * s.c5t / (4.0 * s.c4t) + d(rng)) * 1.001;  // 4 c4 c6 > c5^2
        const double sc = std::sqrt(tangent_ctilde(s));
        const double draw = dD(rng);
        s.D = sc * (dir == CompDirection::Lower ? draw : -draw);
        s.branch_n = 1;
        s.branch_j = 0;
        const auto [lo, hi] = tangent_branch_interval(s);
        double prev = std::numeric_limits<double>::quiet_NaN();
        for (int j = 1; j <= 20; ++j) {
            const double t = lo + (hi - lo) * j / 21.0;
            const double phi = tangent_phi(s, t);
            worst = std::max(worst, std::abs(tangent_ode_residual(s, t)));
            if (!std::isnan(prev)) {
                if (dir == CompDirection::Lower ? phi >= prev : phi <= prev) monotone_ok = false;
            }
            prev = phi;
        }
    }
    VerifyRow row;
    row.name = dir == CompDirection::Lower ? "tangent lower comparison ODE + monotone"
                                           : "tangent upper comparison ODE + monotone";
    row.variant = dir == CompDirection::Lower ? "Lower" : "Upper";
    row.linf = worst;
    row.pass = worst <= 1e-10 && monotone_ok;
    return row;
}

VerifyRow energy_mass_row() {
    const ModelParams mp = params_of(2.0, 1.0, 2);
    InitialDataSpec init{InitialKind::CosineBump, 1.0, 0.4, 0.25};
    const StateTriple tr =
        sample_triple(mp, init, GridSpec{2, 1.0, 64}, fine_control(), 0.05, 0.005);
    const EnergyResidual er = energy_identity_residual(tr.prev, tr.mid, tr.next, 1.0, mp);
    const double mass_resid =
        (cell_integral(tr.next.u) - cell_integral(tr.prev.u)) / (tr.next.t - tr.prev.t);
    VerifyRow row;
    row.name = "energy identity m=1 equals mass residual";
    row.variant = "-";
    row.linf = std::abs(er.residual - mass_resid);
    row.pass = er.residual == mass_resid && er.relative <= 1e-10;
    return row;
}

VerifyRow energy_m3_row() {
    const ModelParams mp = params_of(2.0, 1.0, 2);
    InitialDataSpec init{InitialKind::CosineBump, 1.0, 0.4, 0.25};
    const ResidualReport rep = energy_identity_study(mp, init, GridSpec{2, 1.0, 48},
                                                     fine_control(), 0.05, 0.005, 3.0);
    VerifyRow row;
    row.name = "energy identity m=3 (joint h,dt refinement)";
    row.variant = "-";
    row.linf = rep.linf;
    row.observed_order = rep.observed_order;
    row.pass = rep.observed_order >= 1.8;
    return row;
}

VerifyRow kernel_row() {
    std::mt19937 rng(55u);
    std::uniform_real_distribution<double> dexp(-8.0, 8.0);
    long falsified = 0;
    for (long k = 0; k < 100000; ++k) {
        const double a = std::pow(10.0, dexp(rng));
        const double b = std::pow(10.0, dexp(rng));
        if (!pointwise_kernel_check(a, b)) ++falsified;
    }
    VerifyRow row;
    row.name = "kernel inequality, 1e5 random pairs";
    row.variant = "-";
    row.linf = static_cast<double>(falsified);
    row.pass = falsified == 0;
    return row;
}

}  // namespace

VerifyResult run_verification() {
    VerifyResult res;
    const double pairs[4][2] = {{1.0, 1.0}, {2.0, 1.0}, {1.5, 1.5}, {3.0, 2.0}};
    for (const auto& pq : pairs)
        res.rows.push_back(pq_row("P-residual", false, pq[0], pq[1],
                                  CoefficientForm::Corrected, true));
    for (const auto& pq : pairs)
        res.rows.push_back(pq_row("Q-residual", true, pq[0], pq[1],
                                  CoefficientForm::Corrected, true));
    res.rows.push_back(split_identity_row());
    res.rows.push_back(pq_row("P-residual", false, 2.0, 1.5, CoefficientForm::AsPrinted, false));
    res.rows.push_back(pq_row("Q-residual", true, 2.0, 1.5, CoefficientForm::AsPrinted, false));

    const VerifyRow z_proof = z_row(ZVariant::ProofDisplay, true);
    const VerifyRow z_stmt = z_row(ZVariant::LemmaStatement, false);
    res.rows.push_back(z_proof);
    res.rows.push_back(z_stmt);
    res.rows.push_back(z_steady_row());
    if (z_proof.pass && !z_stmt.pass)
        res.z_variant_passed = "ProofDisplay";
    else if (z_stmt.pass && !z_proof.pass)
        res.z_variant_passed = "LemmaStatement";
    else
        res.z_variant_passed = "ambiguous";

    res.rows.push_back(riccati_population_row());
    res.rows.push_back(riccati_example_row());
    res.rows.push_back(riccati_printed_row());
    res.rows.push_back(tangent_row(CompDirection::Lower));
    res.rows.push_back(tangent_row(CompDirection::Upper));
    res.rows.push_back(energy_mass_row());
    res.rows.push_back(energy_m3_row());
    res.rows.push_back(kernel_row());

    res.ok = true;
    for (const auto& row : res.rows)
        if (row.pass != row.expected_pass) res.ok = false;
    return res;
}

int verify_command() {
    const VerifyResult res = run_verification();
    std::printf("%-46s %-16s %12s %8s  %s\n", "test", "variant", "linf", "order", "verdict");
    std::printf("%s\n", std::string(94, '-').c_str());
    for (const auto& row : res.rows) {
        const char* verdict = row.pass ? "PASS" : (row.expected_pass ? "FAIL" : "FAIL (expected)");
        std::printf("%-46s %-16s %12.4e %8.2f  %s\n", row.name.c_str(), row.variant.c_str(),
                    row.linf, row.observed_order, verdict);
    }
    std::printf("%s\n", std::string(94, '-').c_str());
    std::printf("z-coefficient variant selected by residual: %s\n",
                res.z_variant_passed.c_str());
    std::printf("overall: %s\n", res.ok ? "PASS" : "FAIL");
    return res.ok ? 0 : 3;
}

}  // namespace flc
