// SPDX-License-Identifier: Apache-2.0
#include "psam/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <ostream>

namespace psam {

namespace {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

std::string now_stamp() {
    char buf[32];
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string join_powers(const std::vector<double>& powers) {
    std::string out;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (i) out += ';';
        out += fmt(powers[i]);
    }
    return out;
}

void write_case_columns(std::ostream& out, const ExperimentConfig& config) {
    out << config.model << ',';
    if (config.model == "gauss_markov") out << fmt(config.alpha) << ",,";
    else out << ',' << fmt(config.fd_hz) << ',' << fmt(config.fs_hz);
    // gauss_markov: alpha filled, fd/fs blank; jakes: the reverse
    out << ',' << fmt(config.snr_db) << ',' << to_string(config.mode);
}

}  // namespace

const char* const kOptimizeCsvHeader =
    "model,alpha,fd_hz,fs_hz,snr_db,mode,policy,nP,T,rate,rate_unit,baseline_rate,"
    "training_beneficial,pct_vs_onepilot,pct_vs_policy1,pilot_powers,data_powers";

const char* const kProfileCsvHeader =
    "slot,kind,power,error_variance,isub,m1,m2,p1";

void write_optimize_csv(std::ostream& out, const ExperimentConfig& config,
                        const std::vector<PolicyRow>& rows, bool stamp) {
    if (stamp) out << "# generated-at " << now_stamp() << '\n';
    out << kOptimizeCsvHeader << '\n';
    for (const auto& row : rows) {
        write_case_columns(out, config);
        out << ',' << to_string(row.policy) << ',' << row.pilots << ',' << row.spacing << ','
            << fmt(row.rate) << ',' << to_string(config.rate_unit) << ','
            << fmt(row.baseline_rate) << ',' << (row.training_beneficial ? 1 : 0) << ',';
        if (row.pct_vs_onepilot) out << fmt(*row.pct_vs_onepilot);
        out << ',';
        if (row.pct_vs_policy1) out << fmt(*row.pct_vs_policy1);
        out << ',' << join_powers(row.pilot_powers) << ',' << join_powers(row.data_powers)
            << '\n';
    }
}

std::string optimize_json(const ExperimentConfig& config, const std::vector<PolicyRow>& rows) {
    nlohmann::json doc;
    doc["config_hash"] = config.hash();
    doc["model"] = config.model;
    if (config.model == "gauss_markov") doc["alpha"] = config.alpha;
    else {
        doc["fd_hz"] = config.fd_hz;
        doc["fs_hz"] = config.fs_hz;
    }
    doc["snr_db"] = config.snr_db;
    doc["mode"] = to_string(config.mode);
    doc["rate_unit"] = to_string(config.rate_unit);
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json entry;
        entry["policy"] = to_string(row.policy);
        entry["nP"] = row.pilots;
        entry["T"] = row.spacing;
        entry["rate"] = row.rate;
        entry["baseline_rate"] = row.baseline_rate;
        entry["training_beneficial"] = row.training_beneficial;
        if (row.pct_vs_onepilot) entry["pct_vs_onepilot"] = *row.pct_vs_onepilot;
        if (row.pct_vs_policy1) entry["pct_vs_policy1"] = *row.pct_vs_policy1;
        entry["pilot_powers"] = row.pilot_powers;
        entry["data_powers"] = row.data_powers;
        doc["rows"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

void write_profile_csv(std::ostream& out, const ExperimentConfig& config,
                       const PolicyResult& result, const ErrorProfile& profile,
                       const IsubGrid& grid, bool stamp) {
    if (stamp) out << "# generated-at " << now_stamp() << '\n';
    out << "# policy " << to_string(result.policy_id) << " nP "
        << result.plan.pattern.cluster_k << " T " << result.plan.pattern.spacing_T
        << " rate " << fmt(result.rate) << ' ' << to_string(config.rate_unit) << '\n';
    out << kProfileCsvHeader << '\n';
    const auto& pattern = result.plan.pattern;
    for (int slot = 0; slot < pattern.spacing_T; ++slot) {
        if (slot < pattern.cluster_k) {
            out << slot << ",pilot,"
                << fmt(pattern.pilot_powers[static_cast<std::size_t>(slot)]) << ",,,,,\n";
            continue;
        }
        const auto i = static_cast<std::size_t>(slot - pattern.cluster_k);
        const double power = result.plan.data_powers[i];
        const double v = profile.at(slot);
        out << slot << ",data," << fmt(power) << ',' << fmt(v) << ','
            << fmt(grid.interpolate(power, v)) << ',';
        if (i < result.per_slot_inputs.size()) {
            const auto& input = result.per_slot_inputs[i];
            out << fmt(input.m1) << ',' << fmt(input.m2) << ',' << fmt(input.p1);
        } else {
            out << ",,";
        }
        out << '\n';
    }
}

std::string baseline_json(const ExperimentConfig& config, double baseline_rate) {
    nlohmann::json doc;
    doc["snr_db"] = config.snr_db;
    doc["p_avg"] = config.p_avg();
    doc["rate_unit"] = to_string(config.rate_unit);
    doc["baseline_rate"] = baseline_rate;
    return doc.dump(2) + "\n";
}

}  // namespace psam
