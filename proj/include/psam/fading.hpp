// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <span>
#include <variant>

namespace psam {

/// Zeroth-order Bessel function of the first kind.
/// Ascending series for small arguments, Hankel asymptotic expansion
/// beyond; absolute error <= 1e-10 for |x| <= 50.
double bessel_j0(double x);

struct GaussMarkov {
    double alpha;  // R_i = alpha * R_{i-1} + Z_i, 0 <= alpha < 1
};

struct Jakes {
    double doppler_hz;
    double symbol_period_s;
};

/// Autocorrelation law of the unit-variance fading process.
class FadingModel {
  public:
    static FadingModel gauss_markov(double alpha);
    static FadingModel jakes(double doppler_hz, double symbol_period_s);

    /// Normalized autocorrelation at integer lag (symmetric, phi(0) = 1).
    double autocorrelation(long lag) const;

    /// Autocovariance of the fading coefficients at the given sample indices.
    /// Entry (m, n) = autocorrelation(indices[m] - indices[n]).
    /// Indices must be distinct.
    Eigen::MatrixXd autocovariance_matrix(std::span<const int> indices) const;

    bool is_gauss_markov() const { return std::holds_alternative<GaussMarkov>(law_); }
    bool is_jakes() const { return std::holds_alternative<Jakes>(law_); }

    /// Gauss-Markov coefficient; throws std::logic_error for other laws.
    double alpha() const;
    const Jakes& jakes_params() const;

  private:
    explicit FadingModel(std::variant<GaussMarkov, Jakes> law) : law_(std::move(law)) {}
    std::variant<GaussMarkov, Jakes> law_;
};

}  // namespace psam
