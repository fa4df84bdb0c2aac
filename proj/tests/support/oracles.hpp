// SPDX-License-Identifier: Apache-2.0
//
// Independent reference implementations used only by the test suites. Each
// oracle deliberately takes a different computational route than the library:
// power series instead of split approximations, explicit dense inverses
// instead of factorized solves, Riemann sums instead of Gaussian quadrature.
#pragma once

#include "psam/estimator.hpp"
#include "psam/fading.hpp"
#include "psam/mi_engine.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace psam::oracle {

// Ascending power series for J0; >= 12 terms as an independent route.
inline double bessel_j0_series(double x, int terms = 40) {
    const double q = -0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= terms; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

// LLSE error variance by explicit dense inverse of the full pilot system,
// zero-power pilots kept in place.
inline double llse_variance_dense(const FadingModel& model, const PilotPattern& pattern,
                                  double noise_var, int slot) {
    const auto indices = pilot_index_set(pattern);
    const auto n = static_cast<Eigen::Index>(indices.size());
    Eigen::MatrixXd cov(n, n);
    Eigen::VectorXd cross(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double pi =
            pattern.pilot_powers[static_cast<std::size_t>(i) % pattern.pilot_powers.size()];
        cross(i) = std::sqrt(pi) * model.autocorrelation(slot - indices[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < n; ++j) {
            const double pj =
                pattern.pilot_powers[static_cast<std::size_t>(j) % pattern.pilot_powers.size()];
            cov(i, j) = std::sqrt(pi * pj) *
                        model.autocorrelation(indices[static_cast<std::size_t>(i)] -
                                              indices[static_cast<std::size_t>(j)]);
        }
    }
    cov.diagonal().array() += noise_var;
    return 1.0 - cross.dot(cov.inverse() * cross);
}

// Conditional mutual information with complex mass points and a complex
// estimate, integrated by a plain midpoint Riemann sum over a box covering
// the mixture. Used for the rotation-invariance check and as the
// brute-force reference for the production quadrature.
inline double conditional_mi_riemann(std::complex<double> m1, std::complex<double> m2,
                                     double p1, std::complex<double> rhat, double v,
                                     double noise_var, int cells_per_sigma = 24,
                                     double sigmas = 7.5) {
    const double p[2] = {p1, 1.0 - p1};
    const std::complex<double> mean[2] = {rhat * m1, rhat * m2};
    const double s[2] = {v * std::norm(m1) + noise_var, v * std::norm(m2) + noise_var};

    const double spread = std::max(std::sqrt(s[0]), std::sqrt(s[1]));
    const double lo_re =
        std::min(mean[0].real(), mean[1].real()) - sigmas * spread;
    const double hi_re =
        std::max(mean[0].real(), mean[1].real()) + sigmas * spread;
    const double lo_im =
        std::min(mean[0].imag(), mean[1].imag()) - sigmas * spread;
    const double hi_im =
        std::max(mean[0].imag(), mean[1].imag()) + sigmas * spread;

    const int n_re = static_cast<int>((hi_re - lo_re) / spread * cells_per_sigma);
    const int n_im = static_cast<int>((hi_im - lo_im) / spread * cells_per_sigma);
    const double d_re = (hi_re - lo_re) / n_re;
    const double d_im = (hi_im - lo_im) / n_im;

    double h_y = 0.0;
    for (int a = 0; a < n_re; ++a) {
        const double u = lo_re + (a + 0.5) * d_re;
        for (int b = 0; b < n_im; ++b) {
            const double w = lo_im + (b + 0.5) * d_im;
            double f = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double du = u - mean[i].real();
                const double dw = w - mean[i].imag();
                f += p[i] / (M_PI * s[i]) * std::exp(-(du * du + dw * dw) / s[i]);
            }
            if (f > 0.0) h_y -= f * std::log(f) * d_re * d_im;
        }
    }
    const double h_y_given_x =
        p[0] * std::log(M_PI * M_E * s[0]) + p[1] * std::log(M_PI * M_E * s[1]);
    return h_y - h_y_given_x;  // nats
}

// Expectation over the complex estimate without the magnitude reduction:
// midpoint rule over the Rhat plane, conditional term by Riemann sum.
inline double expected_mi_riemann(const BinaryInput& input, double v, double noise_var,
                                  int rhat_cells = 40, int cells_per_sigma = 14) {
    const double var = 1.0 - v;  // E|Rhat|^2
    if (var <= 0.0)
        return conditional_mi_riemann(input.m1, input.m2, input.p1, 0.0, v, noise_var,
                                      cells_per_sigma);
    const double sd = std::sqrt(var / 2.0);  // per real dimension
    const double span = 4.5 * sd;
    const double cell = 2.0 * span / rhat_cells;
    double acc = 0.0;
    for (int a = 0; a < rhat_cells; ++a) {
        const double re = -span + (a + 0.5) * cell;
        for (int b = 0; b < rhat_cells; ++b) {
            const double im = -span + (b + 0.5) * cell;
            const double density = std::exp(-(re * re + im * im) / var) / (M_PI * var);
            const double mi =
                conditional_mi_riemann(input.m1, input.m2, input.p1,
                                       std::complex<double>(re, im), v, noise_var,
                                       cells_per_sigma);
            acc += density * mi * cell * cell;
        }
    }
    return acc;  // nats
}

// Binary-input mutual information of the no-CSI IID Rayleigh channel:
// y | x ~ CN(0, |x|^2 + noise_var), reduced to a 1-D integral over |y|^2.
inline double no_csi_binary_mi(double m1, double m2, double p1, double noise_var,
                               int steps = 400000, double span_factor = 40.0) {
    const double s[2] = {m1 * m1 + noise_var, m2 * m2 + noise_var};
    const double p[2] = {p1, 1.0 - p1};
    const double hi = span_factor * std::max(s[0], s[1]);
    const double d = hi / steps;
    double h_y = 0.0;
    for (int i = 0; i < steps; ++i) {
        const double rho = (i + 0.5) * d;
        const double f =
            p[0] / s[0] * std::exp(-rho / s[0]) + p[1] / s[1] * std::exp(-rho / s[1]);
        if (f > 0.0) h_y -= f * std::log(f / M_PI) * d;
    }
    const double h_y_given_x =
        p[0] * std::log(M_PI * M_E * s[0]) + p[1] * std::log(M_PI * M_E * s[1]);
    return h_y - h_y_given_x;  // nats
}

// Exhaustive grid search over (p1, m1) with the power constraint active,
// optionally polished by a local pattern step. Independent optimization
// route for optimize_isub.
struct GridSearchResult {
    BinaryInput input;
    double rate = 0.0;  // nats
};

inline GridSearchResult isub_grid_search(double P, double v, double noise_var,
                                         int p_cells, int m_cells,
                                         const MiQuadrature& quad = {}, bool polish = true) {
    const double sqrt_p = std::sqrt(P);
    const auto make = [&](double p1, double m1) {
        const double m2 = std::sqrt((P - p1 * m1 * m1) / (1.0 - p1));
        return BinaryInput{m1, m2, p1};
    };
    GridSearchResult best;
    double best_p1 = 0.5, best_m1 = -0.5 * sqrt_p;
    for (int i = 0; i < p_cells; ++i) {
        const double p1 = (i + 0.5) / p_cells;
        for (int j = 0; j < m_cells; ++j) {
            const double m1 = -sqrt_p * (j + 0.5) / m_cells;
            const double rate =
                expected_mi(make(p1, m1), v, noise_var, quad, RateUnit::nats);
            if (rate > best.rate) {
                best.rate = rate;
                best_p1 = p1;
                best_m1 = m1;
                best.input = make(p1, m1);
            }
        }
    }
    if (!polish) return best;

    double step_p = 1.0 / p_cells, step_m = sqrt_p / m_cells;
    while (step_p > 1e-6) {
        bool moved = false;
        const double cand_p1[3] = {best_p1 - step_p, best_p1, best_p1 + step_p};
        const double cand_m1[3] = {best_m1 - step_m, best_m1, best_m1 + step_m};
        for (double p1 : cand_p1)
            for (double m1 : cand_m1) {
                if (!(p1 > 0.0 && p1 < 1.0 && m1 < 0.0 && m1 >= -sqrt_p)) continue;
                const double rate =
                    expected_mi(make(p1, m1), v, noise_var, quad, RateUnit::nats);
                if (rate > best.rate) {
                    best.rate = rate;
                    best_p1 = p1;
                    best_m1 = m1;
                    best.input = make(p1, m1);
                    moved = true;
                }
            }
        if (!moved) {
            step_p *= 0.5;
            step_m *= 0.5;
        }
    }
    return best;
}

}  // namespace psam::oracle
