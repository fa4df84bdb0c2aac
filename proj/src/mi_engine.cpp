// SPDX-License-Identifier: Apache-2.0
#include "psam/mi_engine.hpp"

#include "psam/nelder_mead.hpp"
#include "psam/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace psam {

namespace {

constexpr double kLn2 = 0.6931471805599453;

double to_unit(double nats, RateUnit unit) {
    return unit == RateUnit::bits ? nats / kLn2 : nats;
}

void check_channel_args(double v, double noise_var) {
    if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("error variance v must lie in [0, 1]");
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise_var must be positive");
}

// I(X;Y | |Rhat| = t) in nats. The output density is a two-component
// circular Gaussian mixture with means t*m_i on the real axis and per-
// component variances s_i = v m_i^2 + noise_var. h(Y) is integrated with a
// tensor Gauss-Hermite rule centered on each component; the imaginary
// direction is folded using the evenness of the mixture in Im(y).
double conditional_mi_nats(const BinaryInput& input, double t, double v, double noise_var,
                           const MiQuadrature& quad) {
    check_channel_args(v, noise_var);
    if (!(t >= 0.0)) throw std::invalid_argument("est_magnitude must be >= 0");

    const double prob[2] = {input.p1, 1.0 - input.p1};
    const double mean[2] = {t * input.m1, t * input.m2};
    const double s[2] = {v * input.m1 * input.m1 + noise_var,
                         v * input.m2 * input.m2 + noise_var};
    if (!(prob[0] >= 0.0 && prob[0] <= 1.0))
        throw std::invalid_argument("p1 must lie in [0, 1]");
    if (prob[0] <= 0.0 || prob[1] <= 0.0) return 0.0;  // deterministic input

    const double log_coef[2] = {std::log(prob[0] / (M_PI * s[0])),
                                std::log(prob[1] / (M_PI * s[1]))};

    const QuadratureRule& gh = gauss_hermite(quad.gh_order);
    const int n = quad.gh_order;
    const int w_start = n / 2;  // fold the symmetric imaginary direction

    double h_y = 0.0;  // accumulates -h(Y) * pi before normalization
    for (int comp = 0; comp < 2; ++comp) {
        const double sd = std::sqrt(s[comp]);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double u = mean[comp] + sd * gh.nodes[static_cast<std::size_t>(j)];
            const double du0 = u - mean[0];
            const double du1 = u - mean[1];
            const double a0 = log_coef[0] - du0 * du0 / s[0];
            const double a1 = log_coef[1] - du1 * du1 / s[1];
            double row = 0.0;
            for (int l = w_start; l < n; ++l) {
                const double wl = gh.nodes[static_cast<std::size_t>(l)];
                const double w2 = sd * wl * sd * wl;
                const double b0 = a0 - w2 / s[0];
                const double b1 = a1 - w2 / s[1];
                const double log_f = b0 > b1 ? b0 + std::log1p(std::exp(b1 - b0))
                                             : b1 + std::log1p(std::exp(b0 - b1));
                const double fold = (n % 2 == 1 && l == w_start) ? 1.0 : 2.0;
                row += fold * gh.weights[static_cast<std::size_t>(l)] * log_f;
            }
            acc += gh.weights[static_cast<std::size_t>(j)] * row;
        }
        h_y += prob[comp] * acc;
    }
    h_y = -h_y / M_PI;

    const double h_y_given_x = prob[0] * std::log(M_PI * M_E * s[0]) +
                               prob[1] * std::log(M_PI * M_E * s[1]);
    return std::max(h_y - h_y_given_x, 0.0);
}

double expected_mi_nats(const BinaryInput& input, double v, double noise_var,
                        const MiQuadrature& quad) {
    check_channel_args(v, noise_var);
    const double second_moment = 1.0 - v;
    if (second_moment <= 0.0) return conditional_mi_nats(input, 0.0, v, noise_var, quad);

    // |Rhat|^2 / (1 - v) is unit exponential and the conditional MI is a
    // smooth function of |Rhat|^2, so Gauss-Laguerre converges fast.
    const QuadratureRule& gl = gauss_laguerre(quad.radial_order);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double t = std::sqrt(second_moment * gl.nodes[i]);
        acc += gl.weights[i] * conditional_mi_nats(input, t, v, noise_var, quad);
    }
    return acc;
}

}  // namespace

double conditional_mi(const BinaryInput& input, double est_magnitude, double v,
                      double noise_var, const MiQuadrature& quad, RateUnit unit) {
    return to_unit(conditional_mi_nats(input, est_magnitude, v, noise_var, quad), unit);
}

double expected_mi(const BinaryInput& input, double v, double noise_var,
                   const MiQuadrature& quad, RateUnit unit) {
    return to_unit(expected_mi_nats(input, v, noise_var, quad), unit);
}

IsubPoint optimize_isub(double P, double v, double noise_var, const MiOptions& options) {
    check_channel_args(v, noise_var);
    if (P < 0.0) throw std::invalid_argument("optimize_isub: P must be >= 0");
    if (P == 0.0) return IsubPoint{BinaryInput{0.0, 0.0, 0.5}, 0.0};

    const double sqrt_p = std::sqrt(P);
    const double p_lo = 1e-6, p_hi = 1.0 - 1e-6;
    const double m_lo = -sqrt_p, m_hi = -1e-9 * sqrt_p;

    const auto make_input = [&](double p1, double m1) {
        p1 = std::clamp(p1, p_lo, p_hi);
        m1 = std::clamp(m1, m_lo, m_hi);
        const double m2 = std::sqrt((P - p1 * m1 * m1) / (1.0 - p1));
        return BinaryInput{m1, m2, p1};
    };
    const auto objective = [&](double p1, double m1) {
        return expected_mi_nats(make_input(p1, m1), v, noise_var, options.quad);
    };

    struct Candidate {
        double p1, m1, value;
    };
    std::vector<Candidate> scan;
    scan.reserve(static_cast<std::size_t>(options.coarse_p * options.coarse_m));
    for (int i = 0; i < options.coarse_p; ++i) {
        const double p1 = (i + 0.5) / options.coarse_p;
        for (int j = 0; j < options.coarse_m; ++j) {
            const double m1 = -sqrt_p * (j + 0.5) / options.coarse_m;
            scan.push_back({p1, m1, objective(p1, m1)});
        }
    }
    std::stable_sort(scan.begin(), scan.end(),
                     [](const Candidate& a, const Candidate& b) { return a.value > b.value; });

    const double cell_p = 1.0 / options.coarse_p;
    const double cell_m = sqrt_p / options.coarse_m;
    std::mt19937 rng(options.seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);

    Candidate best = scan.front();
    const int restarts = std::min<int>(options.restarts, static_cast<int>(scan.size()));
    for (int r = 0; r < restarts; ++r) {
        std::vector<double> start{scan[static_cast<std::size_t>(r)].p1,
                                  scan[static_cast<std::size_t>(r)].m1};
        if (r > 0) {
            start[0] += jitter(rng) * cell_p;
            start[1] += jitter(rng) * cell_m;
        }
        NelderMeadOptions nm;
        nm.max_iter = options.refine_iter;
        nm.f_tol = 1e-12;
        const auto result = nelder_mead_minimize(
            [&](const std::vector<double>& x) { return -objective(x[0], x[1]); }, start,
            {0.6 * cell_p, 0.6 * cell_m}, nm);
        if (-result.value > best.value)
            best = {result.x[0], result.x[1], -result.value};
    }

    IsubPoint point;
    point.input = make_input(best.p1, best.m1);
    point.rate = to_unit(best.value, options.unit);
    return point;
}

}  // namespace psam
