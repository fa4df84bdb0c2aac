// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: builds and persists I_sub grids, optimizes the
// four transmission policies, dumps per-slot frame profiles and runs the
// brute-force power-allocation verification suite.

#include "psam/experiment.hpp"
#include "psam/isub_grid.hpp"
#include "psam/policy.hpp"
#include "psam/report.hpp"
#include "psam/verification.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailed = 2;

struct Cli {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;
    std::string grid_file;
    std::string out;
    bool stamp = false;
};

// Every model/search flag funnels through ExperimentConfig::set so the file
// and the command line accept the same keys.
void add_config_flags(CLI::App* cmd, Cli& cli) {
    cmd->add_option("--config", cli.config_path, "experiment config file (key value lines)");
    const auto forward = [&cli](const std::string& key) {
        return [&cli, key](const std::string& value) { cli.overrides.emplace_back(key, value); };
    };
    cmd->add_option_function<std::string>("--model", forward("model"),
                                          "fading model: gauss_markov | jakes");
    cmd->add_option_function<std::string>("--alpha", forward("alpha"), "Gauss-Markov coefficient");
    cmd->add_option_function<std::string>("--fd", forward("fd"), "Jakes Doppler shift [Hz]");
    cmd->add_option_function<std::string>("--fs", forward("fs"), "Jakes symbol rate [Hz]");
    cmd->add_option_function<std::string>("--snr-db", forward("snr_db"), "received SNR [dB]");
    cmd->add_option_function<std::string>("--mode", forward("mode"), "causal | noncausal");
    cmd->add_option_function<std::string>("--policy", forward("policy"),
                                          "policy selection: 1,2,3,4 or all");
    cmd->add_option_function<std::string>("--kmax", forward("kmax"), "max pilots per cluster");
    cmd->add_option_function<std::string>("--tmax", forward("tmax"), "max inter-pilot spacing");
    cmd->add_option_function<std::string>("--force-k", forward("forced_k"),
                                          "pin the cluster size");
    cmd->add_option_function<std::string>("--papr-cap", forward("papr_cap"),
                                          "peak-to-average power cap on pilots");
    cmd->add_option_function<std::string>("--p-max", forward("p_max"), "grid power ceiling");
    cmd->add_option_function<std::string>("--p-points", forward("p_points"),
                                          "grid points on the power axis");
    cmd->add_option_function<std::string>("--v-points", forward("v_points"),
                                          "grid points on the error-variance axis");
    cmd->add_option_function<std::string>("--rate-unit", forward("rate_unit"), "bits | nats");
    cmd->add_option_function<std::string>("--seed", forward("seed"), "optimizer seed");
    cmd->add_option_function<std::string>("--jobs", forward("jobs"), "worker threads");
    cmd->add_flag("--stamp", cli.stamp, "prepend a generation timestamp to outputs");
}

psam::ExperimentConfig resolve_config(const Cli& cli) {
    psam::ExperimentConfig config;
    if (!cli.config_path.empty()) config = psam::ExperimentConfig::from_file(cli.config_path);
    for (const auto& [key, value] : cli.overrides) config.set(key, value);
    return config;
}

psam::IsubGrid load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open grid file: " + path);
    return psam::IsubGrid::load(in);
}

void require_grid_matches(const psam::IsubGrid& grid, const psam::ExperimentConfig& config) {
    if (std::abs(grid.noise_var() - config.noise_var()) >
        1e-12 * std::max(1.0, config.noise_var()))
        throw std::runtime_error("grid/config mismatch: grid noise_var " +
                                 std::to_string(grid.noise_var()) + " vs config " +
                                 std::to_string(config.noise_var()));
    if (grid.rate_unit() != config.rate_unit)
        throw std::runtime_error("grid/config mismatch: rate units differ");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_grid(const Cli& cli) {
    const auto config = resolve_config(cli);
    auto grid = psam::IsubGrid::build(config.grid_p_max, config.grid_p_points,
                                      config.grid_v_points, config.noise_var(),
                                      config.mi_options(), config.jobs);
    grid.set_config_hash(config.hash());
    std::ostringstream buffer;
    grid.save(buffer);
    write_file(cli.out, buffer.str());
    std::cout << "grid " << grid.p_axis().size() << "x" << grid.v_axis().size()
              << " noise_var " << grid.noise_var() << " -> " << cli.out << "\n";
    return kExitOk;
}

int cmd_optimize(const Cli& cli) {
    const auto config = resolve_config(cli);
    const auto grid = load_grid(cli.grid_file);
    require_grid_matches(grid, config);

    const auto model = config.fading_model();
    const double noise_var = config.noise_var();
    auto search = config.policy_search();

    // Reference rates for the Table-style percent columns.
    psam::PolicySearch one_pilot = search;
    one_pilot.forced_k = 1;
    const double rate_1pilot =
        psam::optimize_policy_I(model, config.p_avg(), noise_var, grid, one_pilot).rate;
    const double rate_policy1 =
        psam::optimize_policy_I(model, config.p_avg(), noise_var, grid, search).rate;

    std::vector<psam::PolicyRow> rows;
    for (psam::PolicyId id : config.policies) {
        const auto result =
            psam::optimize_policy(id, model, config.p_avg(), noise_var, grid, search);
        psam::PolicyRow row;
        row.policy = id;
        row.pilots = result.plan.pattern.cluster_k;
        row.spacing = result.plan.pattern.spacing_T;
        row.rate = result.rate;
        row.baseline_rate = result.baseline_rate;
        row.training_beneficial = result.training_beneficial;
        if (id == psam::PolicyId::I && rate_1pilot > 0.0)
            row.pct_vs_onepilot = 100.0 * (result.rate - rate_1pilot) / rate_1pilot;
        if (id != psam::PolicyId::I && rate_policy1 > 0.0)
            row.pct_vs_policy1 = 100.0 * (result.rate - rate_policy1) / rate_policy1;
        row.pilot_powers = result.plan.pattern.pilot_powers;
        row.data_powers = result.plan.data_powers;
        rows.push_back(std::move(row));
    }

    std::ostringstream csv;
    psam::write_optimize_csv(csv, config, rows, cli.stamp);
    write_file(cli.out + ".csv", csv.str());
    write_file(cli.out + ".json", psam::optimize_json(config, rows));
    std::cout << "wrote " << cli.out << ".csv and " << cli.out << ".json\n";
    return kExitOk;
}

int cmd_verify(const Cli& cli) {
    const auto config = resolve_config(cli);
    psam::VerifySpec spec;
    spec.seed = config.seed;
    const auto outcome = psam::run_verification_suite(spec);
    if (cli.out.empty()) {
        std::cout << outcome.json;
    } else {
        write_file(cli.out, outcome.json);
        std::cout << (outcome.all_pass ? "verification passed" : "verification FAILED")
                  << " -> " << cli.out << "\n";
    }
    return outcome.all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_profile(const Cli& cli) {
    const auto config = resolve_config(cli);
    const auto grid = load_grid(cli.grid_file);
    require_grid_matches(grid, config);

    const auto model = config.fading_model();
    const double noise_var = config.noise_var();
    auto search = config.policy_search();
    search.fill_slot_inputs = true;

    const psam::PolicyId id = config.policies.empty() ? psam::PolicyId::IV : config.policies.front();
    const auto result =
        psam::optimize_policy(id, model, config.p_avg(), noise_var, grid, search);
    const auto profile =
        psam::error_variance_profile(model, result.plan.pattern, noise_var);

    std::ostringstream csv;
    psam::write_profile_csv(csv, config, result, profile, grid, cli.stamp);
    write_file(cli.out, csv.str());
    std::cout << "wrote " << cli.out << "\n";
    return kExitOk;
}

int cmd_baseline(const Cli& cli) {
    const auto config = resolve_config(cli);
    const auto grid = load_grid(cli.grid_file);
    require_grid_matches(grid, config);
    const double rate = psam::no_training_baseline(config.p_avg(), config.noise_var(), grid);
    const std::string json = psam::baseline_json(config, rate);
    if (cli.out.empty()) std::cout << json;
    else write_file(cli.out, json);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pilot-based training optimizer for non-feedback adaptive modulation"};
    app.require_subcommand(1);

    Cli cli;

    auto* grid = app.add_subcommand("grid", "tabulate the I_sub(P, v) surface");
    add_config_flags(grid, cli);
    grid->add_option("--out", cli.out, "output grid file")->required();

    auto* optimize = app.add_subcommand("optimize", "optimize training under policies I-IV");
    add_config_flags(optimize, cli);
    optimize->add_option("--grid-file", cli.grid_file, "precomputed grid")->required();
    optimize->add_option("--out", cli.out, "output prefix (.csv/.json)")->required();

    auto* verify = app.add_subcommand("verify", "brute-force power-allocation checks");
    add_config_flags(verify, cli);
    verify->add_option("--out", cli.out, "verification report (JSON)");

    auto* profile = app.add_subcommand("profile", "per-slot dump of the optimal frame");
    add_config_flags(profile, cli);
    profile->add_option("--grid-file", cli.grid_file, "precomputed grid")->required();
    profile->add_option("--out", cli.out, "output CSV")->required();

    auto* baseline = app.add_subcommand("baseline", "no-training achievable rate");
    add_config_flags(baseline, cli);
    baseline->add_option("--grid-file", cli.grid_file, "precomputed grid")->required();
    baseline->add_option("--out", cli.out, "output JSON (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (grid->parsed()) return cmd_grid(cli);
        if (optimize->parsed()) return cmd_optimize(cli);
        if (verify->parsed()) return cmd_verify(cli);
        if (profile->parsed()) return cmd_profile(cli);
        if (baseline->parsed()) return cmd_baseline(cli);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
