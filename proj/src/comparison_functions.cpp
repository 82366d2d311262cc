#include "flc/comparison_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace flc {

void validate(const RiccatiSpec& spec) {
    if (!(spec.C1 > 0.0 && spec.C2 > 0.0 && spec.C3 > 0.0 && spec.C4 > 0.0))
        throw std::invalid_argument("RiccatiSpec: C1..C4 must be > 0");
    const double disc = spec.C3 * spec.C3 - 4.0 * spec.C2 * spec.C4;
    if (!(disc > 0.0))
        throw std::invalid_argument("RiccatiSpec: C3^2 - 4 C2 C4 must be > 0");
    if (!(spec.M > std::sqrt(disc / (4.0 * spec.C2 * spec.C2))))
        throw std::invalid_argument("RiccatiSpec: M must exceed sqrt(Ctilde)");
}

double riccati_ctilde(const RiccatiSpec& spec) {
    return (spec.C3 * spec.C3 - 4.0 * spec.C2 * spec.C4) / (4.0 * spec.C2 * spec.C2);
}

double riccati_D(const RiccatiSpec& spec) {
    const double sc = std::sqrt(riccati_ctilde(spec));
    const double a = spec.C3 / (2.0 * spec.C2);
    return (spec.M + a - sc) / (spec.M + a + sc);
}

namespace {

double riccati_fraction(const RiccatiSpec& spec, double t) {
    const double sc = std::sqrt(riccati_ctilde(spec));
    const double D = riccati_D(spec);
    return 2.0 * sc / (1.0 - D * std::exp(-2.0 * spec.C2 * sc * t / spec.C1));
}

}  // namespace

double riccati_g(const RiccatiSpec& spec, double t) {
    validate(spec);
    const double sc = std::sqrt(riccati_ctilde(spec));
    return riccati_fraction(spec, t) - spec.C3 / (2.0 * spec.C2) - sc;
}

double riccati_g_printed(const RiccatiSpec& spec, double t) {
    validate(spec);
    const double sc = std::sqrt(riccati_ctilde(spec));
    return riccati_fraction(spec, t) - spec.C3 / (2.0 * spec.C3) - sc;
}

double riccati_g_prime(const RiccatiSpec& spec, double t) {
    const double sc = std::sqrt(riccati_ctilde(spec));
    const double D = riccati_D(spec);
    const double lam = 2.0 * spec.C2 * sc / spec.C1;
    const double e = std::exp(-lam * t);
    const double den = 1.0 - D * e;
    return -2.0 * sc * D * lam * e / (den * den);
}

double riccati_residual(const RiccatiSpec& spec, double t) {
    const double g = riccati_g(spec, t);
    return spec.C1 * riccati_g_prime(spec, t) + spec.C2 * g * g + spec.C3 * g + spec.C4;
}

double riccati_residual_printed(const RiccatiSpec& spec, double t) {
    const double g = riccati_g_printed(spec, t);
    return spec.C1 * riccati_g_prime(spec, t) + spec.C2 * g * g + spec.C3 * g + spec.C4;
}

double riccati_root_time(const RiccatiSpec& spec) {
    validate(spec);
    const double sc = std::sqrt(riccati_ctilde(spec));
    const double a = spec.C3 / (2.0 * spec.C2);
    const double arg = riccati_D(spec) * (a + sc) / (a - sc);
    if (!(arg > 1.0))
        throw std::domain_error("riccati_root_time: log argument " + std::to_string(arg) +
                                " <= 1, no positive root");
    return spec.C1 / (2.0 * spec.C2 * sc) * std::log(arg);
}

void validate(const TangentCompSpec& spec) {
    if (!(spec.c4t > 0.0 && spec.c5t >= 0.0 && spec.c6t > 0.0))
        throw std::invalid_argument("TangentCompSpec: coefficients must be positive");
    if (!(4.0 * spec.c4t * spec.c6t - spec.c5t * spec.c5t > 0.0))
        throw std::invalid_argument("TangentCompSpec: 4 c4t c6t - c5t^2 must be > 0");
    if (spec.branch_j < 0 || spec.branch_j > 5)
        throw std::invalid_argument("TangentCompSpec: branch_j must be in {0..5}");
    if (spec.branch_n < 1)
        throw std::invalid_argument("TangentCompSpec: branch_n must be >= 1");
}

double tangent_ctilde(const TangentCompSpec& spec) {
    return (4.0 * spec.c4t * spec.c6t - spec.c5t * spec.c5t) / (4.0 * spec.c4t * spec.c4t);
}

std::pair<double, double> tangent_branch_interval(const TangentCompSpec& spec) {
    const double sc = std::sqrt(tangent_ctilde(spec));
    const double unit = M_PI / (6.0 * spec.c4t * sc);
    const int base = 6 * spec.branch_n - 6 + spec.branch_j;
    return {base * unit, (base + 1) * unit};
}

namespace {

double tangent_theta(const TangentCompSpec& spec, double t) {
    const double sc = std::sqrt(tangent_ctilde(spec));
    const double tj = spec.branch_j * M_PI / (6.0 * spec.c4t * sc);
    const double rate = spec.c4t * sc;
    const double base = std::atan(spec.D / sc);
    return spec.direction == CompDirection::Lower ? base - rate * (t - tj)
                                                  : base + rate * (t - tj);
}

double tangent_shift(const TangentCompSpec& spec) {
    const double s = spec.c5t / (2.0 * spec.c4t);
    return spec.direction == CompDirection::Lower ? s : -s;
}

}  // namespace

double tangent_phi_unchecked(const TangentCompSpec& spec, double t) {
    const double sc = std::sqrt(tangent_ctilde(spec));
    if (t == 0.0) return spec.D + tangent_shift(spec);
    return sc * std::tan(tangent_theta(spec, t)) + tangent_shift(spec);
}

double tangent_phi(const TangentCompSpec& spec, double t) {
    validate(spec);
    if (t == 0.0) return spec.D + tangent_shift(spec);
    const auto [lo, hi] = tangent_branch_interval(spec);
    if (!(t > lo && t <= hi))
        throw std::domain_error("tangent_phi: t outside the branch interval");
    const double theta = tangent_theta(spec, t);
    // distance from theta to the nearest pole theta = pi/2 + k pi, expressed
    // in branch-interval units of t
    const double pole_gap = std::abs(
        std::remainder(theta - M_PI / 2.0, M_PI));
    const double rate = spec.c4t * std::sqrt(tangent_ctilde(spec));
    const double branch_len = hi - lo;
    if (pole_gap / rate < 1e-9 * branch_len) {
        const double t_pole = t + (spec.direction == CompDirection::Lower ? 1.0 : -1.0) *
                                      std::remainder(theta - M_PI / 2.0, M_PI) / rate;
        throw std::domain_error("tangent_phi: t within pole guard of asymptote at t = " +
                                std::to_string(t_pole));
    }
    return std::sqrt(tangent_ctilde(spec)) * std::tan(theta) + tangent_shift(spec);
}

double tangent_phi_prime(const TangentCompSpec& spec, double t) {
    const double C = tangent_ctilde(spec);
    const double theta = tangent_theta(spec, t);
    const double c = std::cos(theta);
    const double sign = spec.direction == CompDirection::Lower ? -1.0 : 1.0;
    return sign * spec.c4t * C / (c * c);
}

double tangent_ode_residual(const TangentCompSpec& spec, double t) {
    const double phi = tangent_phi(spec, t);
    const double rhs = spec.direction == CompDirection::Lower
                           ? -spec.c4t * phi * phi + spec.c5t * phi - spec.c6t
                           : spec.c4t * phi * phi + spec.c5t * phi + spec.c6t;
    return tangent_phi_prime(spec, t) - rhs;
}

EnvelopeReport comparison_envelope_check(std::span<const DiagnosticsRecord> trajectory,
                                         const TangentCompSpec& phi_lower,
                                         const TangentCompSpec& phi_upper) {
    if (trajectory.empty())
        throw std::invalid_argument("comparison_envelope_check: empty trajectory");
    for (const auto& rec : trajectory)
        if (!std::isfinite(rec.ur_min) || !std::isfinite(rec.ur_max))
            throw std::invalid_argument("comparison_envelope_check: trajectory lacks u_r records");

    EnvelopeReport rep;
    rep.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& rec : trajectory) {
        const double lo = tangent_phi_unchecked(phi_lower, rec.t);
        const double hi = tangent_phi_unchecked(phi_upper, rec.t);
        if (rec.ur_min < lo || rec.ur_max > hi) ++rep.violations;
        rep.min_margin = std::min({rep.min_margin, rec.ur_min - lo, hi - rec.ur_max});
    }
    return rep;
}

}  // namespace flc
