// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "psam/estimator.hpp"
#include "psam/fading.hpp"
#include "psam/mi_engine.hpp"
#include "psam/policy.hpp"

#include <optional>
#include <string>
#include <vector>

namespace psam {

/// One experiment: channel model, SNR, estimation mode, search ranges and
/// grid resolution. Loadable from a flat key-value file; every field can be
/// overridden from the command line.
struct ExperimentConfig {
    std::string model = "gauss_markov";  // gauss_markov | jakes
    double alpha = 0.99;
    double fd_hz = 100.0;
    double fs_hz = 10000.0;  // symbol rate; T_s = 1 / fs_hz
    double snr_db = 0.0;
    EstimationMode mode = EstimationMode::causal;
    std::vector<PolicyId> policies = {PolicyId::I, PolicyId::II, PolicyId::III, PolicyId::IV};
    int k_max = 6;
    int t_max = 120;
    std::optional<int> forced_k;
    std::optional<double> papr_cap;
    double grid_p_max = 10.0;
    int grid_p_points = 60;
    int grid_v_points = 60;
    RateUnit rate_unit = RateUnit::bits;
    unsigned seed = 0;
    int jobs = 1;

    double p_avg() const { return 1.0; }  // SNR is referenced to unit average power
    double noise_var() const;
    FadingModel fading_model() const;
    MiOptions mi_options() const;
    PolicySearch policy_search() const;

    /// Canonical one-line-per-field rendering; hashing input and the basis
    /// for reproducible grid headers.
    std::string canonical_string() const;
    std::string hash() const;  // FNV-1a over canonical_string, hex

    /// Applies one key/value pair; throws std::invalid_argument on unknown
    /// keys or unparseable values.
    void set(const std::string& key, const std::string& value);

    static ExperimentConfig from_file(const std::string& path);
};

std::string to_string(PolicyId id);
std::string to_string(EstimationMode mode);
std::string to_string(RateUnit unit);
std::vector<PolicyId> parse_policies(const std::string& spec);

}  // namespace psam
