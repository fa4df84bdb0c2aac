// SPDX-License-Identifier: Apache-2.0
#include "psam/experiment.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace psam {

namespace {

double parse_double(const std::string& key, const std::string& value) {
    std::size_t consumed = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &consumed);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
    if (consumed != value.size())
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    return out;
}

int parse_int(const std::string& key, const std::string& value) {
    const double d = parse_double(key, value);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw std::invalid_argument("config: expected integer for '" + key + "'");
    return i;
}

std::string format_g(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

}  // namespace

std::string to_string(PolicyId id) {
    switch (id) {
        case PolicyId::I: return "I";
        case PolicyId::II: return "II";
        case PolicyId::III: return "III";
        case PolicyId::IV: return "IV";
    }
    return "?";
}

std::string to_string(EstimationMode mode) {
    return mode == EstimationMode::causal ? "causal" : "noncausal";
}

std::string to_string(RateUnit unit) { return unit == RateUnit::bits ? "bits" : "nats"; }

std::vector<PolicyId> parse_policies(const std::string& spec) {
    if (spec == "all") return {PolicyId::I, PolicyId::II, PolicyId::III, PolicyId::IV};
    std::vector<PolicyId> out;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token == "1" || token == "I") out.push_back(PolicyId::I);
        else if (token == "2" || token == "II") out.push_back(PolicyId::II);
        else if (token == "3" || token == "III") out.push_back(PolicyId::III);
        else if (token == "4" || token == "IV") out.push_back(PolicyId::IV);
        else if (!token.empty())
            throw std::invalid_argument("unknown policy '" + token + "'");
    }
    return out;
}

double ExperimentConfig::noise_var() const {
    if (!std::isfinite(snr_db)) throw std::invalid_argument("snr_db must be finite");
    return std::pow(10.0, -snr_db / 10.0);
}

FadingModel ExperimentConfig::fading_model() const {
    if (model == "gauss_markov") return FadingModel::gauss_markov(alpha);
    if (model == "jakes") return FadingModel::jakes(fd_hz, 1.0 / fs_hz);
    throw std::invalid_argument("unknown model '" + model + "'");
}

MiOptions ExperimentConfig::mi_options() const {
    MiOptions options;
    options.unit = rate_unit;
    options.seed = seed;
    return options;
}

PolicySearch ExperimentConfig::policy_search() const {
    PolicySearch search;
    search.mode = mode;
    search.k_max = k_max;
    search.t_max = t_max;
    search.forced_k = forced_k;
    search.papr_cap = papr_cap;
    search.mi = mi_options();
    return search;
}

std::string ExperimentConfig::canonical_string() const {
    std::ostringstream out;
    out << "model " << model << '\n';
    if (model == "gauss_markov") out << "alpha " << format_g(alpha) << '\n';
    if (model == "jakes")
        out << "fd " << format_g(fd_hz) << "\nfs " << format_g(fs_hz) << '\n';
    out << "snr_db " << format_g(snr_db) << '\n';
    out << "mode " << to_string(mode) << '\n';
    out << "policy ";
    for (std::size_t i = 0; i < policies.size(); ++i)
        out << (i ? "," : "") << to_string(policies[i]);
    out << '\n';
    out << "kmax " << k_max << "\ntmax " << t_max << '\n';
    if (forced_k) out << "forced_k " << *forced_k << '\n';
    if (papr_cap) out << "papr_cap " << format_g(*papr_cap) << '\n';
    out << "p_max " << format_g(grid_p_max) << '\n';
    out << "p_points " << grid_p_points << "\nv_points " << grid_v_points << '\n';
    out << "rate_unit " << to_string(rate_unit) << '\n';
    out << "seed " << seed << '\n';
    return out.str();
}

std::string ExperimentConfig::hash() const {
    // FNV-1a 64-bit
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : canonical_string()) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "model") {
        if (value != "gauss_markov" && value != "jakes")
            throw std::invalid_argument("config: model must be gauss_markov or jakes");
        model = value;
    } else if (key == "alpha") {
        alpha = parse_double(key, value);
    } else if (key == "fd") {
        fd_hz = parse_double(key, value);
    } else if (key == "fs") {
        fs_hz = parse_double(key, value);
    } else if (key == "snr_db") {
        snr_db = parse_double(key, value);
    } else if (key == "mode") {
        if (value == "causal") mode = EstimationMode::causal;
        else if (value == "noncausal") mode = EstimationMode::noncausal;
        else throw std::invalid_argument("config: mode must be causal or noncausal");
    } else if (key == "policy") {
        policies = parse_policies(value);
    } else if (key == "kmax") {
        k_max = parse_int(key, value);
    } else if (key == "tmax") {
        t_max = parse_int(key, value);
    } else if (key == "forced_k") {
        forced_k = parse_int(key, value);
    } else if (key == "papr_cap") {
        papr_cap = parse_double(key, value);
    } else if (key == "p_max") {
        grid_p_max = parse_double(key, value);
    } else if (key == "p_points") {
        grid_p_points = parse_int(key, value);
    } else if (key == "v_points") {
        grid_v_points = parse_int(key, value);
    } else if (key == "rate_unit") {
        if (value == "bits") rate_unit = RateUnit::bits;
        else if (value == "nats") rate_unit = RateUnit::nats;
        else throw std::invalid_argument("config: rate_unit must be bits or nats");
    } else if (key == "seed") {
        seed = static_cast<unsigned>(parse_int(key, value));
    } else if (key == "jobs") {
        jobs = parse_int(key, value);
    } else {
        throw std::invalid_argument("config: unknown key '" + key + "'");
    }
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        std::istringstream ss(line);
        std::string key, value;
        if (!(ss >> key)) continue;  // blank line
        if (!(ss >> value))
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": key '" + key + "' has no value");
        std::string extra;
        if (ss >> extra)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                        ": trailing tokens after '" + key + "'");
        config.set(key, value);
    }
    return config;
}

}  // namespace psam
