// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace psam {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Hermite rule for integral f(x) e^{-x^2} dx over the line.
/// Rules are computed once per order and cached; lookups are thread-safe.
const QuadratureRule& gauss_hermite(int n);

/// n-point Gauss-Laguerre rule for integral f(x) e^{-x} dx over [0, inf).
const QuadratureRule& gauss_laguerre(int n);

}  // namespace psam
