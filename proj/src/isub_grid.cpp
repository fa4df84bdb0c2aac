// SPDX-License-Identifier: Apache-2.0
#include "psam/isub_grid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace psam {

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

// Finds the cell [axis[i], axis[i+1]] containing x and the interpolation
// fraction within it.
std::pair<std::size_t, double> locate(const std::vector<double>& axis, double x,
                                      const char* name) {
    if (!(x >= axis.front() && x <= axis.back()))
        throw std::domain_error(std::string("interpolate: ") + name + " out of grid range");
    if (x == axis.back()) return {axis.size() - 2, 1.0};
    const auto it = std::upper_bound(axis.begin(), axis.end(), x);
    const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
    const std::size_t lo = hi - 1;
    const double span = axis[hi] - axis[lo];
    return {lo, span > 0.0 ? (x - axis[lo]) / span : 0.0};
}

void run_jobs(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
    if (jobs <= 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            work(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

}  // namespace

IsubGrid IsubGrid::build(double p_max, int p_points, int v_points, double noise_var,
                         const MiOptions& options, int jobs) {
    if (!(p_max > 0.0)) throw std::invalid_argument("build: p_max must be positive");
    if (p_points < 2 || v_points < 2)
        throw std::invalid_argument("build: need at least 2 points per axis");
    if (!(noise_var > 0.0)) throw std::invalid_argument("build: noise_var must be positive");

    IsubGrid grid;
    grid.noise_var_ = noise_var;
    grid.rate_unit_ = options.unit;

    grid.p_axis_.push_back(0.0);
    const double p_min = p_max * 1e-3;
    for (int i = 0; i < p_points; ++i) {
        const double frac = p_points == 1 ? 1.0 : static_cast<double>(i) / (p_points - 1);
        grid.p_axis_.push_back(p_min * std::pow(p_max / p_min, frac));
    }
    grid.p_axis_.back() = p_max;

    for (int i = 0; i < v_points; ++i)
        grid.v_axis_.push_back(static_cast<double>(i) / (v_points - 1));
    grid.v_axis_.back() = 1.0;

    const std::size_t np = grid.p_axis_.size(), nv = grid.v_axis_.size();
    grid.values_.assign(np * nv, 0.0);
    // The P = 0 row is identically zero; skip it.
    run_jobs((np - 1) * nv, jobs, [&](std::size_t flat) {
        const std::size_t pi = 1 + flat / nv;
        const std::size_t vi = flat % nv;
        grid.values_[pi * nv + vi] =
            optimize_isub(grid.p_axis_[pi], grid.v_axis_[vi], noise_var, options).rate;
    });
    return grid;
}

double IsubGrid::interpolate(double power, double v) const {
    const auto [pi, a] = locate(p_axis_, power, "power");
    const auto [vi, b] = locate(v_axis_, v, "v");
    const std::size_t nv = v_axis_.size();
    const double f00 = values_[pi * nv + vi];
    const double f10 = values_[(pi + 1) * nv + vi];
    const double f01 = values_[pi * nv + vi + 1];
    const double f11 = values_[(pi + 1) * nv + vi + 1];
    return (1.0 - a) * (1.0 - b) * f00 + a * (1.0 - b) * f10 + (1.0 - a) * b * f01 +
           a * b * f11;
}

void IsubGrid::save(std::ostream& out) const {
    out << "psam-isub-grid v1\n";
    out << "rate_unit " << (rate_unit_ == RateUnit::bits ? "bits" : "nats") << '\n';
    out << "noise_var " << format_double(noise_var_) << '\n';
    out << "config_hash " << (config_hash_.empty() ? "-" : config_hash_) << '\n';
    out << "p_axis " << p_axis_.size() << '\n';
    for (double p : p_axis_) out << format_double(p) << '\n';
    out << "v_axis " << v_axis_.size() << '\n';
    for (double v : v_axis_) out << format_double(v) << '\n';
    out << "values\n";
    const std::size_t nv = v_axis_.size();
    for (std::size_t pi = 0; pi < p_axis_.size(); ++pi) {
        for (std::size_t vi = 0; vi < nv; ++vi) {
            if (vi) out << ' ';
            out << format_double(values_[pi * nv + vi]);
        }
        out << '\n';
    }
    out << "end\n";
}

IsubGrid IsubGrid::load(std::istream& in) {
    const auto fail = [](const std::string& what) -> IsubGrid {
        throw std::runtime_error("isub grid parse error: " + what);
    };

    std::string line;
    if (!std::getline(in, line) || line != "psam-isub-grid v1") return fail("bad magic");

    IsubGrid grid;
    std::string key, value;

    in >> key >> value;
    if (key != "rate_unit" || (value != "bits" && value != "nats")) return fail("rate_unit");
    grid.rate_unit_ = value == "bits" ? RateUnit::bits : RateUnit::nats;

    in >> key >> grid.noise_var_;
    if (key != "noise_var" || !in) return fail("noise_var");

    in >> key >> grid.config_hash_;
    if (key != "config_hash" || !in) return fail("config_hash");

    std::size_t np = 0, nv = 0;
    in >> key >> np;
    if (key != "p_axis" || !in || np < 2) return fail("p_axis");
    grid.p_axis_.resize(np);
    for (double& p : grid.p_axis_)
        if (!(in >> p)) return fail("p_axis values");

    in >> key >> nv;
    if (key != "v_axis" || !in || nv < 2) return fail("v_axis");
    grid.v_axis_.resize(nv);
    for (double& v : grid.v_axis_)
        if (!(in >> v)) return fail("v_axis values");

    in >> key;
    if (key != "values") return fail("values header");
    grid.values_.resize(np * nv);
    for (double& x : grid.values_)
        if (!(in >> x)) return fail("value entries");
    in >> key;
    if (key != "end") return fail("missing end marker");

    if (!std::is_sorted(grid.p_axis_.begin(), grid.p_axis_.end()) ||
        !std::is_sorted(grid.v_axis_.begin(), grid.v_axis_.end()))
        return fail("axes not sorted");
    return grid;
}

}  // namespace psam
