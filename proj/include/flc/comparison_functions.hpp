#pragma once

#include <span>
#include <utility>

#include "flc/diagnostics.hpp"

namespace flc {

/// Parameters of the closed-form Riccati solution g with
/// C1 g' + C2 g^2 + C3 g + C4 = 0, g(0) = M. Valid when
/// Ctilde = (C3^2 - 4 C2 C4)/(4 C2^2) > 0 and M > sqrt(Ctilde).
struct RiccatiSpec {
    double C1 = 1.0, C2 = 1.0, C3 = 3.0, C4 = 2.0;
    double M = 1.5;
};

/// Throws std::invalid_argument on a violated invariant.
void validate(const RiccatiSpec& spec);

double riccati_ctilde(const RiccatiSpec& spec);

/// D = (M + C3/(2C2) - sqrt(Ctilde)) / (M + C3/(2C2) + sqrt(Ctilde)), in (0,1).
double riccati_D(const RiccatiSpec& spec);

/// g(t) = 2 sqrt(Ctilde) / (1 - D e^{-2 C2 sqrt(Ctilde) t / C1})
///        - C3/(2 C2) - sqrt(Ctilde).
/// The middle term must be -C3/(2 C2) for the ODE to hold; the uncorrected
/// -C3/(2 C3) variant is kept as a negative control (riccati_g_printed).
/// g(0) = M exactly and g is strictly decreasing.
double riccati_g(const RiccatiSpec& spec, double t);

/// Analytic derivative of the closed form.
double riccati_g_prime(const RiccatiSpec& spec, double t);

/// C1 g' + C2 g^2 + C3 g + C4 at time t; vanishes to rounding.
double riccati_residual(const RiccatiSpec& spec, double t);

/// Uncorrected variant with the -C3/(2 C3) middle term. Negative control:
/// its ODE residual does not vanish.
double riccati_g_printed(const RiccatiSpec& spec, double t);
double riccati_residual_printed(const RiccatiSpec& spec, double t);

/// First positive root t1 of g, in closed form; |g(t1)| <= 1e-12 max(1, M).
/// Throws std::domain_error when the log argument is <= 1 (no positive root),
/// reporting the offending value.
double riccati_root_time(const RiccatiSpec& spec);

enum class CompDirection { Lower, Upper };

/// Tangent-shaped comparison function on one branch. Lower solves
/// phi' = -c4t phi^2 + c5t phi - c6t and decreases; Upper solves
/// phi' = c4t phi^2 + c5t phi + c6t and increases. Both need
/// 4 c4t c6t - c5t^2 > 0. branch_n >= 1 and branch_j in {0..5} select the
/// branch interval ((6n-6+j) pi / (6 c4t sqrt(C~)), (6n-5+j) pi / (...)].
struct TangentCompSpec {
    double c4t = 1.0, c5t = 0.0, c6t = 1.0;
    double D = 0.0;
    int branch_j = 0;
    int branch_n = 1;
    CompDirection direction = CompDirection::Lower;
};

void validate(const TangentCompSpec& spec);

double tangent_ctilde(const TangentCompSpec& spec);

/// The branch interval in t.
std::pair<double, double> tangent_branch_interval(const TangentCompSpec& spec);

/// Value on the branch; t = 0 returns the seed D +- c5t/(2 c4t). Throws
/// std::domain_error if t is outside the branch or within 1e-9 branch-lengths
/// of a tangent pole (the error names the pole location).
double tangent_phi(const TangentCompSpec& spec, double t);

/// Analytic derivative of the branch formula.
double tangent_phi_prime(const TangentCompSpec& spec, double t);

/// phi' minus the defining quadratic; vanishes to rounding away from poles.
double tangent_ode_residual(const TangentCompSpec& spec, double t);

/// Global (pi-periodic) evaluation without branch/pole checks; used by the
/// envelope diagnostic, where covering the horizon with a pole-free window is
/// the caller's responsibility.
double tangent_phi_unchecked(const TangentCompSpec& spec, double t);

struct EnvelopeReport {
    long violations = 0;
    double min_margin = 0.0;  ///< min over records of distance to the nearer envelope
};

/// Counts records whose recorded u_r range escapes [phi_lower(t), phi_upper(t)].
/// Requires records carrying u_r extremes (a run records them in memory).
EnvelopeReport comparison_envelope_check(std::span<const DiagnosticsRecord> trajectory,
                                         const TangentCompSpec& phi_lower,
                                         const TangentCompSpec& phi_upper);

}  // namespace flc
