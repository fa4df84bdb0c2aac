// SPDX-License-Identifier: Apache-2.0
#include "psam/estimator.hpp"

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using psam::EstimationMode;
using psam::FadingModel;
using psam::PilotPattern;

namespace {

PilotPattern causal_pattern(int t, int k, std::vector<double> powers) {
    return PilotPattern{t, k, EstimationMode::causal, std::move(powers)};
}

PilotPattern random_pattern(std::mt19937& rng, EstimationMode mode) {
    std::uniform_int_distribution<int> k_dist(1, 6);
    std::uniform_real_distribution<double> power_dist(0.05, 4.0);
    const int k = k_dist(rng);
    std::uniform_int_distribution<int> t_dist(k + 1, 40);
    const int t = t_dist(rng);
    std::vector<double> powers(static_cast<std::size_t>(k));
    for (double& p : powers) p = power_dist(rng);
    return PilotPattern{t, k, mode, std::move(powers)};
}

}  // namespace

TEST_CASE("pilot index sets") {
    CHECK(psam::pilot_index_set(causal_pattern(10, 2, {1.0, 1.0})) ==
          std::vector<int>{0, 1});
    CHECK(psam::pilot_index_set(PilotPattern{10, 2, EstimationMode::noncausal, {1.0, 1.0}}) ==
          std::vector<int>{0, 1, 10, 11});
    CHECK(psam::pilot_index_set(causal_pattern(5, 1, {1.0})) == std::vector<int>{0});
}

TEST_CASE("pattern validation") {
    CHECK_THROWS_AS(causal_pattern(4, 4, {1, 1, 1, 1}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(causal_pattern(4, 0, {}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(causal_pattern(4, 2, {1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(causal_pattern(4, 1, {-1.0}).validate(), std::invalid_argument);
    const auto model = FadingModel::gauss_markov(0.9);
    CHECK_THROWS_AS(psam::error_variance_profile(model, causal_pattern(4, 1, {1.0}), 0.0),
                    std::invalid_argument);
}

TEST_CASE("single-pilot scalar oracle") {
    // v_j = 1 - alpha^{2j} P0 / (P0 + noise)
    const auto model = FadingModel::gauss_markov(0.9);
    const auto profile = psam::error_variance_profile(model, causal_pattern(4, 1, {1.0}), 1.0);
    CHECK(profile.first_data_slot == 1);
    CHECK(profile.at(1) == doctest::Approx(0.595).epsilon(1e-12));
    CHECK(profile.at(2) == doctest::Approx(1.0 - std::pow(0.9, 4) * 0.5).epsilon(1e-12));
    CHECK(profile.at(3) == doctest::Approx(1.0 - std::pow(0.9, 6) * 0.5).epsilon(1e-12));

    const auto gm = psam::causal_error_variance_gm(0.9, causal_pattern(4, 1, {1.0}), 1.0);
    CHECK(gm.at(2) == doctest::Approx(0.67195).epsilon(1e-10));
}

TEST_CASE("white fading gives uninformative pilots") {
    const auto model = FadingModel::gauss_markov(0.0);
    for (auto mode : {EstimationMode::causal, EstimationMode::noncausal}) {
        const auto profile = psam::error_variance_profile(
            model, PilotPattern{8, 2, mode, {2.0, 3.0}}, 0.7);
        for (double v : profile.variances) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("zero pilot power means no information") {
    const auto model = FadingModel::gauss_markov(0.95);
    const auto profile =
        psam::error_variance_profile(model, causal_pattern(6, 2, {0.0, 0.0}), 1.0);
    for (double v : profile.variances) CHECK(v == 1.0);
    const auto gm = psam::causal_error_variance_gm(0.95, causal_pattern(6, 2, {0.0, 0.0}), 1.0);
    for (double v : gm.variances) CHECK(v == 1.0);
}

TEST_CASE("zero-power pilots are dropped without changing the estimate") {
    const auto model = FadingModel::gauss_markov(0.92);
    const auto with_zero =
        psam::error_variance_profile(model, causal_pattern(9, 3, {0.0, 1.5, 2.0}), 0.8);
    for (int j = 3; j < 9; ++j) {
        const double dense = psam::oracle::llse_variance_dense(
            model, causal_pattern(9, 3, {0.0, 1.5, 2.0}), 0.8, j);
        CHECK(with_zero.at(j) == doctest::Approx(dense).epsilon(1e-12));
    }
}

TEST_CASE("two-pilot case matches the dense-inverse oracle") {
    const auto model = FadingModel::gauss_markov(0.95);
    const auto pattern = causal_pattern(6, 2, {1.0, 1.0});
    const auto profile = psam::error_variance_profile(model, pattern, 0.5);
    for (int j = 2; j < 6; ++j)
        CHECK(profile.at(j) ==
              doctest::Approx(psam::oracle::llse_variance_dense(model, pattern, 0.5, j))
                  .epsilon(1e-12));
}

TEST_CASE("noncausal profile matches the dense oracle and uses the next cluster") {
    const auto model = FadingModel::gauss_markov(0.9);
    const PilotPattern pattern{8, 2, EstimationMode::noncausal, {1.0, 2.0}};
    const auto profile = psam::error_variance_profile(model, pattern, 0.6);
    for (int j = 2; j < 8; ++j)
        CHECK(profile.at(j) ==
              doctest::Approx(psam::oracle::llse_variance_dense(model, pattern, 0.6, j))
                  .epsilon(1e-12));

    // the last data slot sits next to the future cluster, so it estimates
    // far better than under causal-only observation
    const PilotPattern causal_only{8, 2, EstimationMode::causal, {1.0, 2.0}};
    const auto causal_profile = psam::error_variance_profile(model, causal_only, 0.6);
    CHECK(profile.at(7) < causal_profile.at(7) - 0.05);
}

TEST_CASE("cross-check: causal gauss-markov specialization vs generic profile") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> alpha_dist(0.0, 0.999);
    std::uniform_real_distribution<double> noise_dist(0.05, 3.0);
    double max_diff = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double alpha = alpha_dist(rng);
        const auto model = FadingModel::gauss_markov(alpha);
        const auto pattern = random_pattern(rng, EstimationMode::causal);
        const double noise_var = noise_dist(rng);
        const auto generic = psam::error_variance_profile(model, pattern, noise_var);
        const auto special = psam::causal_error_variance_gm(alpha, pattern, noise_var);
        REQUIRE(generic.variances.size() == special.variances.size());
        for (std::size_t i = 0; i < generic.variances.size(); ++i)
            max_diff = std::max(max_diff,
                                std::abs(generic.variances[i] - special.variances[i]));
    }
    CHECK(max_diff <= 1e-10);
}

TEST_CASE("causal profiles are monotone and log-affine in the slot index") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> alpha_dist(0.05, 0.995);
    std::uniform_real_distribution<double> noise_dist(0.1, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double alpha = alpha_dist(rng);
        const auto model = FadingModel::gauss_markov(alpha);
        const auto pattern = random_pattern(rng, EstimationMode::causal);
        const auto profile =
            psam::error_variance_profile(model, pattern, noise_dist(rng));
        const double slope = 2.0 * std::log(alpha);
        for (std::size_t i = 0; i + 1 < profile.variances.size(); ++i) {
            CHECK(profile.variances[i + 1] >= profile.variances[i] - 1e-12);
            // log(1 - v_j) is affine in j with slope 2 log(alpha)
            const double a = 1.0 - profile.variances[i];
            const double b = 1.0 - profile.variances[i + 1];
            if (a > 1e-12 && b > 1e-12)
                CHECK(std::log(b) - std::log(a) == doctest::Approx(slope).epsilon(1e-9));
        }
    }
}

TEST_CASE("raising any pilot power never hurts") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> alpha_dist(0.1, 0.99);
    std::uniform_real_distribution<double> bump_dist(0.1, 2.0);
    std::uniform_real_distribution<double> noise_dist(0.2, 2.0);
    for (int trial = 0; trial < 60; ++trial) {
        const auto model = FadingModel::gauss_markov(alpha_dist(rng));
        const auto mode = trial % 2 ? EstimationMode::causal : EstimationMode::noncausal;
        auto pattern = random_pattern(rng, mode);
        const double noise_var = noise_dist(rng);
        const auto base = psam::error_variance_profile(model, pattern, noise_var);

        std::uniform_int_distribution<int> pick(0, pattern.cluster_k - 1);
        auto boosted = pattern;
        boosted.pilot_powers[static_cast<std::size_t>(pick(rng))] += bump_dist(rng);
        const auto better = psam::error_variance_profile(model, boosted, noise_var);
        for (std::size_t i = 0; i < base.variances.size(); ++i)
            CHECK(better.variances[i] <= base.variances[i] + 1e-11);
    }
}

TEST_CASE("noncausal profile with symmetric powers rises away from both clusters") {
    // The interior of the frame estimates worse than the slots adjacent to
    // either cluster; the profile is unimodal rather than bounded by its
    // edge values.
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> alpha_dist(0.5, 0.99);
    std::uniform_real_distribution<double> power_dist(0.2, 3.0);
    for (int trial = 0; trial < 40; ++trial) {
        const auto model = FadingModel::gauss_markov(alpha_dist(rng));
        std::uniform_int_distribution<int> k_dist(1, 3);
        const int k = k_dist(rng);
        std::uniform_int_distribution<int> t_dist(k + 3, 30);
        const int t = t_dist(rng);
        const double level = power_dist(rng);
        const PilotPattern pattern{t, k, EstimationMode::noncausal,
                                   std::vector<double>(static_cast<std::size_t>(k), level)};
        const auto profile = psam::error_variance_profile(model, pattern, 0.5);
        const auto& v = profile.variances;
        std::size_t peak = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[peak]) peak = i;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (i < peak) CHECK(v[i + 1] >= v[i] - 1e-11);
            if (i >= peak) CHECK(v[i + 1] <= v[i] + 1e-11);
        }
        // interior maximum meets or exceeds both edges
        CHECK(v[peak] >= std::max(v.front(), v.back()) - 1e-12);
    }
}

TEST_CASE("error variance at a pilot slot is available for the theorem checks") {
    const auto model = FadingModel::gauss_markov(0.9);
    const auto pattern = causal_pattern(5, 1, {1.0});
    // estimating R_0 from its own pilot: v = 1 - P/(P + noise)
    CHECK(psam::error_variance_at(model, pattern, 1.0, 0) ==
          doctest::Approx(0.5).epsilon(1e-12));
}
