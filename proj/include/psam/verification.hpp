// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "psam/theory.hpp"

#include <functional>
#include <string>
#include <vector>

namespace psam {

/// Parameters of the power-allocation verification suite.
struct VerifySpec {
    std::vector<int> ks = {2, 3, 4};
    std::vector<double> alphas = {0.9, 0.99};
    std::vector<double> noise_vars = {0.5, 1.0, 2.0};
    int budget_steps = 20;       // simplex resolution: step = budget / budget_steps
    int transfer_checks = 500;   // random moves toward the last pilot
    int lemma_instances = 100;
    int xi_instances = 100;
    unsigned seed = 0;
};

using XiDirectFn =
    std::function<double(double x_a, double x_b, double alpha, std::span<const double>)>;

struct VerificationOutcome {
    bool all_pass = false;
    std::string json;  // machine-readable per-check report
};

/// Brute-force verification of the power-allocation theorem, the ordering
/// lemma and the xi identities. The xi evaluation hook exists so tests can
/// inject a broken implementation and watch the suite fail.
VerificationOutcome run_verification_suite(const VerifySpec& spec,
                                           const XiDirectFn& xi_fn = theory::xi_direct);

}  // namespace psam
