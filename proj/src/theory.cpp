// SPDX-License-Identifier: Apache-2.0
#include "psam/theory.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psam::theory {

namespace {

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0))
        throw std::invalid_argument("alpha must satisfy 0 <= alpha < 1");
}

Eigen::MatrixXd gm_covariance(double alpha, Eigen::Index k) {
    Eigen::MatrixXd a(k, k);
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j)
            a(i, j) = std::pow(alpha, std::abs(static_cast<double>(i - j)));
    return a;
}

Eigen::VectorXd gm_steering(double alpha, Eigen::Index k) {
    Eigen::VectorXd v(k);
    for (Eigen::Index i = 0; i < k; ++i) v(i) = std::pow(alpha, static_cast<double>(k - 1 - i));
    return v;
}

// C(n + k - 1, k - 1) with an early bail-out above the cap.
std::uint64_t composition_count(std::uint64_t n, int k, std::uint64_t cap) {
    std::uint64_t count = 1;
    for (int i = 1; i < k; ++i) {
        count = count * (n + static_cast<std::uint64_t>(i)) / static_cast<std::uint64_t>(i);
        if (count > cap) return cap + 1;
    }
    return count;
}

}  // namespace

double phi(double alpha, std::span<const double> powers, double noise_var) {
    check_alpha(alpha);
    if (!(noise_var > 0.0)) throw std::invalid_argument("noise_var must be positive");
    const auto k = static_cast<Eigen::Index>(powers.size());
    if (k == 0) throw std::invalid_argument("phi: need at least one pilot");
    for (double p : powers)
        if (!(p >= 0.0)) throw std::invalid_argument("phi: powers must be >= 0");

    Eigen::VectorXd d(k);
    for (Eigen::Index i = 0; i < k; ++i) d(i) = std::sqrt(powers[static_cast<std::size_t>(i)]);
    Eigen::MatrixXd m = d.asDiagonal() * gm_covariance(alpha, k) * d.asDiagonal();
    m.diagonal().array() += noise_var;
    const Eigen::VectorXd rhs = d.asDiagonal() * gm_steering(alpha, k);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw std::runtime_error("phi: system not PD");
    return rhs.dot(llt.solve(rhs));
}

double quad_form_inv(double alpha, std::span<const double> diag_entries) {
    check_alpha(alpha);
    const auto k = static_cast<Eigen::Index>(diag_entries.size());
    if (k == 0) return 0.0;
    Eigen::MatrixXd m = gm_covariance(alpha, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double u = diag_entries[static_cast<std::size_t>(i)];
        if (!(u >= 0.0)) throw std::invalid_argument("quad_form_inv: diagonal must be >= 0");
        m(i, i) += u;
    }
    const Eigen::VectorXd v = gm_steering(alpha, k);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) throw std::runtime_error("quad_form_inv: system not PD");
    return v.dot(llt.solve(v));
}

AllocationReport verify_theorem1(double alpha, int k, double budget, double noise_var,
                                 double grid_step) {
    check_alpha(alpha);
    if (k < 1) throw std::invalid_argument("verify_theorem1: k must be >= 1");
    if (!(budget > 0.0) || !(grid_step > 0.0))
        throw std::invalid_argument("verify_theorem1: budget and grid_step must be positive");
    const double steps_real = budget / grid_step;
    const auto n = static_cast<std::uint64_t>(std::llround(steps_real));
    if (std::abs(steps_real - static_cast<double>(n)) > 1e-9 * steps_real || n == 0)
        throw std::invalid_argument("verify_theorem1: grid_step must divide budget");

    constexpr std::uint64_t kMaxPoints = 10'000'000;
    if (composition_count(n, k, kMaxPoints) > kMaxPoints)
        throw std::invalid_argument("verify_theorem1: enumeration exceeds 1e7 points");

    AllocationReport report;
    report.k = k;
    report.budget = budget;
    report.grid_step = grid_step;

    std::vector<double> powers(static_cast<std::size_t>(k), 0.0);
    std::vector<std::uint64_t> units(static_cast<std::size_t>(k), 0);
    units.back() = n;

    // Odometer enumeration of all compositions of n into k parts,
    // lexicographic in (units[0], ..., units[k-2]).
    std::vector<std::uint64_t> head(static_cast<std::size_t>(k > 0 ? k - 1 : 0), 0);
    bool done = false;
    while (!done) {
        std::uint64_t used = 0;
        for (std::uint64_t h : head) used += h;
        if (used <= n) {
            for (std::size_t i = 0; i + 1 < powers.size(); ++i)
                units[i] = head[i];
            units.back() = n - used;
            for (std::size_t i = 0; i < powers.size(); ++i)
                powers[i] = static_cast<double>(units[i]) * grid_step;
            const double value = phi(alpha, powers, noise_var);
            ++report.points_enumerated;
            if (value > report.best_phi || report.points_enumerated == 1) {
                report.best_phi = value;
                report.best_allocation = powers;
            }
        }

        if (head.empty()) break;
        // advance the odometer, skipping over-budget prefixes
        std::size_t pos = head.size();
        while (pos > 0) {
            --pos;
            ++head[pos];
            std::uint64_t partial = 0;
            for (std::size_t i = 0; i <= pos; ++i) partial += head[i];
            if (partial <= n) {
                for (std::size_t i = pos + 1; i < head.size(); ++i) head[i] = 0;
                break;
            }
            if (pos == 0) {
                done = true;
                break;
            }
            head[pos] = 0;
        }
    }

    std::vector<double> corner(static_cast<std::size_t>(k), 0.0);
    corner.back() = budget;
    report.corner_phi = phi(alpha, corner, noise_var);
    report.is_corner_optimal = report.corner_phi >= report.best_phi - 1e-10;
    return report;
}

PermutationReport verify_lemma1(double alpha, std::span<const double> x_values) {
    check_alpha(alpha);
    const auto k = x_values.size();
    if (k < 1 || k > 8)
        throw std::invalid_argument("verify_lemma1: need 1 <= k <= 8 (k! enumeration)");

    PermutationReport report;
    report.sorted_non_increasing.assign(x_values.begin(), x_values.end());
    std::sort(report.sorted_non_increasing.begin(), report.sorted_non_increasing.end(),
              std::greater<>());
    report.non_increasing_value = quad_form_inv(alpha, report.sorted_non_increasing);

    std::vector<double> perm(x_values.begin(), x_values.end());
    std::sort(perm.begin(), perm.end());
    report.best_value = -1.0;
    do {
        const double value = quad_form_inv(alpha, perm);
        ++report.permutations_checked;
        if (value > report.best_value) {
            report.best_value = value;
            report.best_arrangement = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    report.non_increasing_is_optimal =
        report.non_increasing_value >= report.best_value - 1e-12;
    return report;
}

double xi_closed_form(double x_a, double x_b, double alpha, double phi_km2) {
    const double a2p = alpha * alpha * phi_km2;
    const double a4p = alpha * alpha * alpha * alpha * phi_km2;
    const double one_a2 = 1.0 - alpha * alpha;
    const double num = (alpha - alpha * a2p) * (alpha - alpha * a2p) * x_b +
                       (1.0 - a4p) * (1.0 - a4p) * x_a +
                       (1.0 - a2p) * (1.0 - a4p) * one_a2;
    const double den = x_a * x_b + (1.0 - a4p) * x_a + (1.0 - a2p) * x_b +
                       (1.0 - a2p) * one_a2;
    return num / den;
}

double xi_direct(double x_a, double x_b, double alpha, std::span<const double> base_diag) {
    std::vector<double> full(base_diag.begin(), base_diag.end());
    full.push_back(x_a);
    full.push_back(x_b);
    const double phi_k = quad_form_inv(alpha, full);
    const double phi_km2 = quad_form_inv(alpha, base_diag);
    const double a4 = alpha * alpha * alpha * alpha;
    return phi_k - a4 * phi_km2;
}

}  // namespace psam::theory
