// SPDX-License-Identifier: Apache-2.0
#include "psam/fading.hpp"

#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace psam {

namespace {

// Ascending series sum_k (-x^2/4)^k / (k!)^2. Largest intermediate term at
// x = 12 is ~4e3, so cancellation stays below ~1e-12 absolute.
double j0_series(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k <= 60; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) + 1e-300) break;
    }
    return sum;
}

// Hankel expansion J0(x) ~ sqrt(2/(pi x)) [P(x) cos(chi) - Q(x) sin(chi)],
// chi = x - pi/4, with P and Q summed until the terms stop decreasing.
double j0_asymptotic(double x) {
    // a_{m+1} = a_m * -(2m+1)^2 / (8 (m+1)) for order zero
    double a[40];
    a[0] = 1.0;
    for (int m = 0; m < 39; ++m) {
        const double odd = 2.0 * m + 1.0;
        a[m + 1] = a[m] * (-(odd * odd)) / (8.0 * (m + 1));
    }

    const double inv_x = 1.0 / x;
    double p_sum = 0.0, q_sum = 0.0;

    double prev = std::abs(a[0]);
    double pw = 1.0;  // inv_x^{2k}
    for (int k = 0; 2 * k < 40; ++k) {
        const double term = a[2 * k] * pw;
        if (k > 0 && std::abs(term) > prev) break;
        p_sum += term;
        prev = std::abs(term);
        pw *= inv_x * inv_x;
    }
    prev = std::abs(a[1] * inv_x);
    pw = inv_x;  // inv_x^{2k+1}
    for (int k = 0; 2 * k + 1 < 40; ++k) {
        const double term = a[2 * k + 1] * pw;
        if (k > 0 && std::abs(term) > prev) break;
        q_sum += term;
        prev = std::abs(term);
        pw *= inv_x * inv_x;
    }

    const double chi = x - 0.25 * M_PI;
    return std::sqrt(2.0 / (M_PI * x)) * (p_sum * std::cos(chi) - q_sum * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    // The asymptotic tail only reaches ~1e-10 for x >= ~10; the series is
    // exact-to-rounding up to 12, so the switchover sits there.
    return x <= 12.0 ? j0_series(x) : j0_asymptotic(x);
}

FadingModel FadingModel::gauss_markov(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("gauss_markov: alpha must satisfy 0 <= alpha < 1");
    return FadingModel{GaussMarkov{alpha}};
}

FadingModel FadingModel::jakes(double doppler_hz, double symbol_period_s) {
    if (!(doppler_hz > 0.0) || !(symbol_period_s > 0.0))
        throw std::invalid_argument("jakes: doppler_hz and symbol_period_s must be positive");
    return FadingModel{Jakes{doppler_hz, symbol_period_s}};
}

double FadingModel::autocorrelation(long lag) const {
    const double l = std::abs(static_cast<double>(lag));
    if (const auto* gm = std::get_if<GaussMarkov>(&law_)) {
        if (lag == 0) return 1.0;
        return std::pow(gm->alpha, l);
    }
    const auto& jk = std::get<Jakes>(law_);
    return bessel_j0(2.0 * M_PI * jk.doppler_hz * jk.symbol_period_s * l);
}

Eigen::MatrixXd FadingModel::autocovariance_matrix(std::span<const int> indices) const {
    const auto n = static_cast<Eigen::Index>(indices.size());
    std::set<int> unique(indices.begin(), indices.end());
    if (static_cast<Eigen::Index>(unique.size()) != n)
        throw std::invalid_argument("autocovariance_matrix: indices must be distinct");

    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        cov(m, m) = 1.0;
        for (Eigen::Index k = m + 1; k < n; ++k) {
            const double r = autocorrelation(static_cast<long>(indices[m]) - indices[k]);
            cov(m, k) = r;
            cov(k, m) = r;
        }
    }
    return cov;
}

double FadingModel::alpha() const {
    if (const auto* gm = std::get_if<GaussMarkov>(&law_)) return gm->alpha;
    throw std::logic_error("alpha() requires a Gauss-Markov model");
}

const Jakes& FadingModel::jakes_params() const {
    if (const auto* jk = std::get_if<Jakes>(&law_)) return *jk;
    throw std::logic_error("jakes_params() requires a Jakes model");
}

}  // namespace psam
