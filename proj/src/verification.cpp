// SPDX-License-Identifier: Apache-2.0
#include "psam/verification.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

namespace psam {

namespace {

using nlohmann::json;

json theorem_section(const VerifySpec& spec, bool& all_pass) {
    json section = json::array();
    for (int k : spec.ks)
        for (double alpha : spec.alphas)
            for (double noise_var : spec.noise_vars) {
                const double budget = static_cast<double>(k);
                const auto report = theory::verify_theorem1(alpha, k, budget, noise_var,
                                                            budget / spec.budget_steps);
                json entry;
                entry["k"] = k;
                entry["alpha"] = alpha;
                entry["noise_var"] = noise_var;
                entry["budget"] = budget;
                entry["grid_step"] = report.grid_step;
                entry["points"] = report.points_enumerated;
                entry["best_phi"] = report.best_phi;
                entry["corner_phi"] = report.corner_phi;
                entry["pass"] = report.is_corner_optimal;
                all_pass = all_pass && report.is_corner_optimal;
                section.push_back(std::move(entry));
            }
    return section;
}

json transfer_section(const VerifySpec& spec, bool& all_pass) {
    std::mt19937 rng(spec.seed + 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> k_dist(2, 5);

    int failures = 0;
    for (int trial = 0; trial < spec.transfer_checks; ++trial) {
        const int k = k_dist(rng);
        const double alpha = 0.05 + 0.9 * unit(rng);
        const double noise_var = 0.2 + 2.0 * unit(rng);
        std::vector<double> powers(static_cast<std::size_t>(k));
        for (double& p : powers) p = 4.0 * unit(rng);
        const double before = theory::phi(alpha, powers, noise_var);

        std::uniform_int_distribution<int> donor_dist(0, k - 2);
        const auto donor = static_cast<std::size_t>(donor_dist(rng));
        const double delta = powers[donor] * unit(rng);
        powers[donor] -= delta;
        powers.back() += delta;
        const double after = theory::phi(alpha, powers, noise_var);
        if (!(after >= before - 1e-12)) ++failures;
    }
    json entry;
    entry["checks"] = spec.transfer_checks;
    entry["failures"] = failures;
    entry["pass"] = failures == 0;
    all_pass = all_pass && failures == 0;
    return entry;
}

json lemma_section(const VerifySpec& spec, bool& all_pass) {
    json section = json::array();

    // worked 2x2 case: alpha = 0.5, x = {1, 2}
    {
        const double down = theory::quad_form_inv(0.5, std::vector<double>{2.0, 1.0});
        const double up = theory::quad_form_inv(0.5, std::vector<double>{1.0, 2.0});
        const bool pass = std::abs(down - 3.0 / 5.75) < 1e-12 &&
                          std::abs(up - 2.25 / 5.75) < 1e-12 && down > up;
        json entry;
        entry["case"] = "worked-2x2";
        entry["value_non_increasing"] = down;
        entry["value_increasing"] = up;
        entry["pass"] = pass;
        all_pass = all_pass && pass;
        section.push_back(std::move(entry));
    }

    std::mt19937 rng(spec.seed + 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> k_dist(2, 6);
    int failures = 0;
    for (int trial = 0; trial < spec.lemma_instances; ++trial) {
        const int k = k_dist(rng);
        const double alpha = 0.02 + 0.96 * unit(rng);
        std::vector<double> xs(static_cast<std::size_t>(k));
        for (double& x : xs) x = 10.0 * unit(rng);
        const auto report = theory::verify_lemma1(alpha, xs);
        if (!report.non_increasing_is_optimal) ++failures;
    }
    json entry;
    entry["case"] = "random-permutations";
    entry["instances"] = spec.lemma_instances;
    entry["failures"] = failures;
    entry["pass"] = failures == 0;
    all_pass = all_pass && failures == 0;
    section.push_back(std::move(entry));
    return section;
}

json xi_section(const VerifySpec& spec, const XiDirectFn& xi_fn, bool& all_pass) {
    std::mt19937 rng(spec.seed + 3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> base_dist(0, 4);

    int mismatch = 0, swap_failures = 0, derivative_failures = 0;
    for (int trial = 0; trial < spec.xi_instances; ++trial) {
        const double alpha = 0.05 + 0.9 * unit(rng);
        std::vector<double> base(static_cast<std::size_t>(base_dist(rng)));
        for (double& x : base) x = 8.0 * unit(rng);
        const double phi_km2 = theory::quad_form_inv(alpha, base);
        double x_a = 8.0 * unit(rng), x_b = 8.0 * unit(rng);
        if (x_a > x_b) std::swap(x_a, x_b);  // enforce x_a < x_b for the swap check
        x_b += 1e-3;

        const double closed = theory::xi_closed_form(x_a, x_b, alpha, phi_km2);
        const double direct = xi_fn(x_a, x_b, alpha, base);
        if (std::abs(closed - direct) > 1e-10) ++mismatch;

        const double swapped = xi_fn(x_b, x_a, alpha, base);
        if (!(direct < swapped)) ++swap_failures;

        const double h = 1e-6;
        const double da = (theory::xi_closed_form(x_a + h, x_b, alpha, phi_km2) -
                           theory::xi_closed_form(x_a - h, x_b, alpha, phi_km2)) /
                          (2 * h);
        const double db = (theory::xi_closed_form(x_a, x_b + h, alpha, phi_km2) -
                           theory::xi_closed_form(x_a, x_b - h, alpha, phi_km2)) /
                          (2 * h);
        if (da > 1e-9 || db > 1e-9) ++derivative_failures;
    }
    json entry;
    entry["instances"] = spec.xi_instances;
    entry["closed_vs_direct_mismatches"] = mismatch;
    entry["swap_inequality_failures"] = swap_failures;
    entry["derivative_sign_failures"] = derivative_failures;
    entry["pass"] = mismatch == 0 && swap_failures == 0 && derivative_failures == 0;
    all_pass = all_pass && entry["pass"].get<bool>();
    return entry;
}

}  // namespace

VerificationOutcome run_verification_suite(const VerifySpec& spec, const XiDirectFn& xi_fn) {
    bool all_pass = true;
    json doc;
    doc["theorem1"] = theorem_section(spec, all_pass);
    doc["theorem1_transfers"] = transfer_section(spec, all_pass);
    doc["lemma1"] = lemma_section(spec, all_pass);
    doc["xi"] = xi_section(spec, xi_fn, all_pass);
    doc["all_pass"] = all_pass;

    VerificationOutcome outcome;
    outcome.all_pass = all_pass;
    outcome.json = doc.dump(2) + "\n";
    return outcome;
}

}  // namespace psam
