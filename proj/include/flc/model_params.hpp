#pragma once

namespace flc {

/// Problem data of the flux-limited chemotaxis system: diffusion exponent p,
/// chemotaxis exponent q (both >= 1), sensitivity chi > 0, dimension n and
/// ball radius R.
struct ModelParams {
    double p = 1.0;
    double q = 1.0;
    double chi = 1.0;
    int n = 1;
    double R = 1.0;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const ModelParams& params);

}  // namespace flc
