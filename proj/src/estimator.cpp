// SPDX-License-Identifier: Apache-2.0
#include "psam/estimator.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psam {

namespace {

constexpr double kBoundarySnap = 1e-12;

double clamp_variance(double v) {
    // Snap only roundoff excursions; anything further out is a real defect.
    if (v < 0.0 && v >= -kBoundarySnap) return 0.0;
    if (v > 1.0 && v <= 1.0 + kBoundarySnap) return 1.0;
    return v;
}

struct PilotSystem {
    std::vector<int> indices;        // pilot slots with nonzero power
    std::vector<double> powers;      // matching powers
    Eigen::LLT<Eigen::MatrixXd> llt; // factorization of D A D^T + noise_var I
    bool empty = false;
};

PilotSystem build_system(const FadingModel& model, const PilotPattern& pattern,
                         double noise_var) {
    pattern.validate();
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise_var must be positive");

    PilotSystem sys;
    const auto all = pilot_index_set(pattern);
    const int k = pattern.cluster_k;
    for (std::size_t s = 0; s < all.size(); ++s) {
        const double power = pattern.pilot_powers[s % static_cast<std::size_t>(k)];
        if (power > 0.0) {
            sys.indices.push_back(all[s]);
            sys.powers.push_back(power);
        }
    }
    if (sys.indices.empty()) {
        sys.empty = true;  // no information: v_j = 1 everywhere
        return sys;
    }

    const auto n = static_cast<Eigen::Index>(sys.indices.size());
    Eigen::MatrixXd cov = model.autocovariance_matrix(sys.indices);
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = std::sqrt(sys.powers[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd sys_matrix = d.asDiagonal() * cov * d.asDiagonal();
    sys_matrix.diagonal().array() += noise_var;
    sys.llt.compute(sys_matrix);
    if (sys.llt.info() != Eigen::Success)
        throw std::runtime_error("error_variance_profile: pilot system not positive definite");
    return sys;
}

double variance_from_system(const FadingModel& model, const PilotSystem& sys, int slot) {
    if (sys.empty) return 1.0;
    const auto n = static_cast<Eigen::Index>(sys.indices.size());
    Eigen::VectorXd cross(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        cross(i) = std::sqrt(sys.powers[idx]) *
                   model.autocorrelation(slot - sys.indices[idx]);
    }
    const double v = 1.0 - cross.dot(sys.llt.solve(cross));
    return clamp_variance(v);
}

}  // namespace

void PilotPattern::validate() const {
    if (cluster_k < 1 || cluster_k >= spacing_T)
        throw std::invalid_argument("PilotPattern: need 1 <= cluster_k < spacing_T");
    if (pilot_powers.size() != static_cast<std::size_t>(cluster_k))
        throw std::invalid_argument("PilotPattern: pilot_powers size must equal cluster_k");
    for (double p : pilot_powers)
        if (!(p >= 0.0)) throw std::invalid_argument("PilotPattern: pilot powers must be >= 0");
}

std::vector<int> pilot_index_set(const PilotPattern& pattern) {
    pattern.validate();
    std::vector<int> indices;
    for (int s = 0; s < pattern.cluster_k; ++s) indices.push_back(s);
    if (pattern.mode == EstimationMode::noncausal) {
        for (int s = 0; s < pattern.cluster_k; ++s) indices.push_back(pattern.spacing_T + s);
    }
    return indices;
}

double error_variance_at(const FadingModel& model, const PilotPattern& pattern,
                         double noise_var, int slot) {
    return variance_from_system(model, build_system(model, pattern, noise_var), slot);
}

ErrorProfile error_variance_profile(const FadingModel& model, const PilotPattern& pattern,
                                    double noise_var) {
    const PilotSystem sys = build_system(model, pattern, noise_var);
    ErrorProfile profile;
    profile.first_data_slot = pattern.cluster_k;
    profile.variances.reserve(static_cast<std::size_t>(pattern.spacing_T - pattern.cluster_k));
    for (int j = pattern.cluster_k; j < pattern.spacing_T; ++j)
        profile.variances.push_back(variance_from_system(model, sys, j));
    return profile;
}

ErrorProfile causal_error_variance_gm(double alpha, const PilotPattern& pattern,
                                      double noise_var) {
    pattern.validate();
    if (pattern.mode != EstimationMode::causal)
        throw std::invalid_argument("causal_error_variance_gm: pattern must be causal");
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise_var must be positive");
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("causal_error_variance_gm: 0 <= alpha < 1");

    const int k = pattern.cluster_k;
    const int t = pattern.spacing_T;

    // phi = V^T D^T (D A D^T + noise_var I)^{-1} D V over nonzero-power pilots
    std::vector<int> kept;
    for (int s = 0; s < k; ++s)
        if (pattern.pilot_powers[static_cast<std::size_t>(s)] > 0.0) kept.push_back(s);

    double phi = 0.0;
    if (!kept.empty()) {
        const auto n = static_cast<Eigen::Index>(kept.size());
        Eigen::VectorXd sqrt_p(n);
        Eigen::VectorXd dv(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const int si = kept[static_cast<std::size_t>(i)];
            sqrt_p(i) = std::sqrt(pattern.pilot_powers[static_cast<std::size_t>(si)]);
            dv(i) = sqrt_p(i) * std::pow(alpha, k - 1 - si);
        }
        Eigen::MatrixXd a(n, n);  // D A D^T
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) {
                const int si = kept[static_cast<std::size_t>(i)];
                const int sj = kept[static_cast<std::size_t>(j)];
                a(i, j) = sqrt_p(i) * std::pow(alpha, std::abs(si - sj)) * sqrt_p(j);
            }
        a.diagonal().array() += noise_var;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("causal_error_variance_gm: system not positive definite");
        phi = dv.dot(llt.solve(dv));
    }

    ErrorProfile profile;
    profile.first_data_slot = k;
    profile.variances.reserve(static_cast<std::size_t>(t - k));
    for (int j = k; j < t; ++j) {
        const double decay = std::pow(alpha, 2.0 * (j - k + 1));
        profile.variances.push_back(clamp_variance(1.0 - decay * phi));
    }
    return profile;
}

}  // namespace psam
