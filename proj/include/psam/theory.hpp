// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace psam::theory {

/// phi = V^T D^T (D A D^T + noise_var I)^{-1} D V with V = (a^{k-1},...,1)^T,
/// A the Gauss-Markov pilot autocovariance and D = diag(sqrt(P_s)).
/// Equals 1 - v at the last pilot slot.
double phi(double alpha, std::span<const double> powers, double noise_var);

/// V^T (A + diag(u))^{-1} V for non-negative diagonal entries u.
double quad_form_inv(double alpha, std::span<const double> diag_entries);

struct AllocationReport {
    int k = 0;
    double budget = 0.0;
    double grid_step = 0.0;
    std::vector<double> best_allocation;
    double best_phi = 0.0;
    double corner_phi = 0.0;  // all power on the last pilot
    bool is_corner_optimal = false;
    std::uint64_t points_enumerated = 0;
};

/// Enumerates every allocation of `budget` over k pilots on a step grid and
/// reports where phi peaks. Throws if the enumeration would exceed 1e7
/// points.
AllocationReport verify_theorem1(double alpha, int k, double budget, double noise_var,
                                 double grid_step);

struct PermutationReport {
    std::vector<double> sorted_non_increasing;
    double non_increasing_value = 0.0;
    std::vector<double> best_arrangement;
    double best_value = 0.0;
    bool non_increasing_is_optimal = false;
    std::uint64_t permutations_checked = 0;
};

/// Evaluates V^T (A + U)^{-1} V for every permutation of the given values on
/// the diagonal of U and checks that the non-increasing arrangement attains
/// the maximum. Requires k <= 8.
PermutationReport verify_lemma1(double alpha, std::span<const double> x_values);

/// The swap-comparison kernel of the Lemma 1 induction, evaluated two ways:
/// from its displayed rational expression, and directly from the block
/// decomposition with phi_{k-2} materialized from a concrete sub-instance.
double xi_closed_form(double x_a, double x_b, double alpha, double phi_km2);
double xi_direct(double x_a, double x_b, double alpha, std::span<const double> base_diag);

}  // namespace psam::theory
