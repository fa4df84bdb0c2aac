// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "psam/estimator.hpp"
#include "psam/experiment.hpp"
#include "psam/policy.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace psam {

/// One table row: the optimum found for (test case, policy).
struct PolicyRow {
    PolicyId policy = PolicyId::I;
    int pilots = 0;   // nP
    int spacing = 0;  // T
    double rate = 0.0;
    double baseline_rate = 0.0;
    bool training_beneficial = false;
    std::optional<double> pct_vs_onepilot;  // Policy I vs the 1-pilot scheme
    std::optional<double> pct_vs_policy1;   // Policies II-IV vs Policy I
    std::vector<double> pilot_powers;
    std::vector<double> data_powers;
};

extern const char* const kOptimizeCsvHeader;
extern const char* const kProfileCsvHeader;

void write_optimize_csv(std::ostream& out, const ExperimentConfig& config,
                        const std::vector<PolicyRow>& rows, bool stamp = false);
std::string optimize_json(const ExperimentConfig& config, const std::vector<PolicyRow>& rows);

/// Per-slot dump of one frame under the given result: slot, power, error
/// variance, interpolated I_sub and the optimal input distribution.
void write_profile_csv(std::ostream& out, const ExperimentConfig& config,
                       const PolicyResult& result, const ErrorProfile& profile,
                       const IsubGrid& grid, bool stamp = false);

std::string baseline_json(const ExperimentConfig& config, double baseline_rate);

}  // namespace psam
