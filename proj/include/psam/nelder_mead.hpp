// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

namespace psam {

struct NelderMeadOptions {
    int max_iter = 200;
    double f_tol = 1e-12;  // stop when the simplex function spread falls below
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
};

/// Downhill simplex minimization. The objective is responsible for any box
/// handling (clamp or penalize); the simplex itself is unconstrained.
NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& start,
                                      const std::vector<double>& step,
                                      const NelderMeadOptions& options = {});

}  // namespace psam
