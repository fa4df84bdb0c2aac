// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace psam {

enum class RateUnit { bits, nats };

/// Two-mass-point input: m1 < 0 < m2, P(X = m1) = p1.
struct BinaryInput {
    double m1 = 0.0;
    double m2 = 0.0;
    double p1 = 0.0;

    double power() const { return p1 * m1 * m1 + (1.0 - p1) * m2 * m2; }
};

struct MiQuadrature {
    int gh_order = 24;      // tensor Gauss-Hermite order over the output plane
    int radial_order = 16;  // Gauss-Laguerre order over the estimate magnitude
};

struct MiOptions {
    MiQuadrature quad{};
    RateUnit unit = RateUnit::bits;
    int coarse_p = 12;       // multistart scan resolution in p1
    int coarse_m = 12;       // ... and in m1
    int restarts = 3;        // simplex refinements from the best scan cells
    int refine_iter = 120;
    unsigned seed = 0;       // jitters the restart points
};

/// I(X; Y | Rhat = rhat) for y|x ~ CN(rhat x, v x^2 + noise_var). Only the
/// magnitude of the estimate matters (the conditional law is rotation
/// invariant), so the estimate is passed as a magnitude.
double conditional_mi(const BinaryInput& input, double est_magnitude, double v,
                      double noise_var, const MiQuadrature& quad = {},
                      RateUnit unit = RateUnit::bits);

/// E over |Rhat| (Rayleigh, second moment 1 - v) of conditional_mi.
double expected_mi(const BinaryInput& input, double v, double noise_var,
                   const MiQuadrature& quad = {}, RateUnit unit = RateUnit::bits);

struct IsubPoint {
    BinaryInput input;
    double rate = 0.0;
};

/// I_sub(P, v): maximum of expected_mi over two-mass-point inputs with
/// p1 m1^2 + (1-p1) m2^2 = P. The constraint is imposed with equality,
/// reducing the search to (p1, m1) with m2 determined by the budget.
IsubPoint optimize_isub(double P, double v, double noise_var, const MiOptions& options = {});

}  // namespace psam
