// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "psam/fading.hpp"

#include <vector>

namespace psam {

enum class EstimationMode { causal, noncausal };

/// Frame geometry: k pilots at the head of every frame of T symbols.
struct PilotPattern {
    int spacing_T = 0;
    int cluster_k = 0;
    EstimationMode mode = EstimationMode::causal;
    std::vector<double> pilot_powers;  // one entry per pilot, >= 0

    /// Throws std::invalid_argument on a malformed pattern.
    void validate() const;
};

/// LLSE estimation error variances v_j for the data slots of one frame.
struct ErrorProfile {
    int first_data_slot = 0;         // == cluster_k
    std::vector<double> variances;   // v_j, j = first_data_slot .. T-1

    double at(int slot) const { return variances.at(static_cast<std::size_t>(slot - first_data_slot)); }
};

/// Indices of the pilots used to estimate the frame's data symbols.
/// Causal: {0..k-1}. Non-causal adds the next frame's cluster {T..T+k-1},
/// which reuses the same per-pilot powers (periodic transmission).
std::vector<int> pilot_index_set(const PilotPattern& pattern);

/// LLSE error variance of R_slot given the received pilots, for any slot.
/// Exposed beyond the data range so the power-allocation checks can evaluate
/// the variance at the last pilot slot itself.
double error_variance_at(const FadingModel& model, const PilotPattern& pattern,
                         double noise_var, int slot);

/// v_j = 1 - c^T (D A D^T + noise_var I)^{-1} c for every data slot, where c
/// is the cross-covariance between R_j and the received pilots. Zero-power
/// pilots are dropped from the system before solving.
ErrorProfile error_variance_profile(const FadingModel& model, const PilotPattern& pattern,
                                    double noise_var);

/// Causal Gauss-Markov specialization: v_j = 1 - alpha^{2(j-k+1)} * phi with
/// phi = V^T D^T (D A D^T + noise_var I)^{-1} D V, V = (alpha^{k-1}, ..., 1)^T.
ErrorProfile causal_error_variance_gm(double alpha, const PilotPattern& pattern,
                                      double noise_var);

}  // namespace psam
