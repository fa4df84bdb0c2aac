// SPDX-License-Identifier: Apache-2.0
#include "psam/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <stdexcept>

namespace {

double gh_integral(int order, const std::function<double(double)>& f) {
    const auto& rule = psam::gauss_hermite(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

double gl_integral(int order, const std::function<double(double)>& f) {
    const auto& rule = psam::gauss_laguerre(order);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(rule.nodes[i]);
    return acc;
}

}  // namespace

TEST_CASE("gauss-hermite moments") {
    const double sqrt_pi = std::sqrt(M_PI);
    for (int order : {8, 16, 24, 48}) {
        CAPTURE(order);
        CHECK(gh_integral(order, [](double) { return 1.0; }) ==
              doctest::Approx(sqrt_pi).epsilon(1e-14));
        CHECK(gh_integral(order, [](double x) { return x; }) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
        CHECK(gh_integral(order, [](double x) { return x * x; }) ==
              doctest::Approx(0.5 * sqrt_pi).epsilon(1e-13));
        CHECK(gh_integral(order, [](double x) { return x * x * x * x; }) ==
              doctest::Approx(0.75 * sqrt_pi).epsilon(1e-13));
    }
    // degree 2n-1 exactness: x^14 with 8 nodes; moment = 135135/128 sqrt(pi)
    CHECK(gh_integral(8, [](double x) { return std::pow(x, 14); }) ==
          doctest::Approx(135135.0 / 128.0 * sqrt_pi).epsilon(1e-12));
}

TEST_CASE("gauss-laguerre moments") {
    for (int order : {8, 16, 32}) {
        CAPTURE(order);
        CHECK(gl_integral(order, [](double) { return 1.0; }) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(gl_integral(order, [](double x) { return x; }) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gl_integral(order, [](double x) { return x * x; }) ==
              doctest::Approx(2.0).epsilon(1e-12));
        CHECK(gl_integral(order, [](double x) { return x * x * x; }) ==
              doctest::Approx(6.0).epsilon(1e-12));
    }
    // E[exp(-x)] under the exponential weight = 1/2
    CHECK(gl_integral(32, [](double x) { return std::exp(-x); }) ==
          doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("rules are cached and stable") {
    const auto& a = psam::gauss_hermite(24);
    const auto& b = psam::gauss_hermite(24);
    CHECK(&a == &b);
    CHECK(a.nodes.size() == 24);
    CHECK_THROWS_AS(psam::gauss_hermite(0), std::invalid_argument);
}
