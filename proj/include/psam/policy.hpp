// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "psam/estimator.hpp"
#include "psam/fading.hpp"
#include "psam/isub_grid.hpp"
#include "psam/mi_engine.hpp"

#include <optional>
#include <vector>

namespace psam {

/// One frame's transmission parameters: pilot geometry plus the powers of
/// the T - k data slots.
struct FramePlan {
    PilotPattern pattern;
    std::vector<double> data_powers;  // P_i for i = k .. T-1

    double total_power() const;
};

enum class PolicyId { I = 1, II = 2, III = 3, IV = 4 };

struct PolicyResult {
    PolicyId policy_id = PolicyId::I;
    FramePlan plan;
    double rate = 0.0;
    std::vector<BinaryInput> per_slot_inputs;  // one per data slot
    double baseline_rate = 0.0;                // no-training IID channel
    bool training_beneficial = false;
};

struct PolicySearch {
    EstimationMode mode = EstimationMode::causal;
    int k_max = 6;
    int t_max = 120;
    std::optional<int> forced_k;       // pin the cluster size (Figs. reproduction)
    std::optional<double> papr_cap;    // per-pilot power <= papr_cap * p_avg
    int t_patience = 15;               // stop after this many consecutively worse T
    MiOptions mi{};                    // for the per-slot input report
    bool fill_slot_inputs = false;

    // Inner allocation-ascent controls. The scan tier is used while ranking
    // (k, T, P_tr) candidates; the winner is re-polished at the fine tier.
    double ascent_delta_min_scan = 1e-4;
    double ascent_delta_min_final = 1e-8;
};

/// (1/T) sum over data slots of I_sub(P_i, v_i); pilot slots are charged
/// through the 1/T normalization.
double frame_rate(const FramePlan& plan, const FadingModel& model, double noise_var,
                  const IsubGrid& grid);

/// Per-symbol rate when every slot carries data and no estimate exists
/// (v = 1 everywhere).
double no_training_baseline(double p_avg, double noise_var, const IsubGrid& grid);

// Policies:
//   I   - pilots and data share one flat power level (= p_avg)
//   II  - flat pilot level and flat data level, chosen separately
//   III - flat pilot level, per-slot data powers
//   IV  - per-slot powers everywhere
PolicyResult optimize_policy_I(const FadingModel& model, double p_avg, double noise_var,
                               const IsubGrid& grid, const PolicySearch& search = {});
PolicyResult optimize_policy_II(const FadingModel& model, double p_avg, double noise_var,
                                const IsubGrid& grid, const PolicySearch& search = {});
PolicyResult optimize_policy_III(const FadingModel& model, double p_avg, double noise_var,
                                 const IsubGrid& grid, const PolicySearch& search = {});
PolicyResult optimize_policy_IV(const FadingModel& model, double p_avg, double noise_var,
                                const IsubGrid& grid, const PolicySearch& search = {});

PolicyResult optimize_policy(PolicyId id, const FadingModel& model, double p_avg,
                             double noise_var, const IsubGrid& grid,
                             const PolicySearch& search = {});

}  // namespace psam
