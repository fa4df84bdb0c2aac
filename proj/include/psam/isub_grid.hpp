// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "psam/mi_engine.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace psam {

/// Tabulated I_sub(P, v) surface at a fixed noise level.
///
/// The power axis is P = 0 followed by geometrically spaced points up to
/// p_max; the error-variance axis is uniform on [0, 1]. Values are stored
/// row-major with one row per power.
class IsubGrid {
  public:
    IsubGrid() = default;

    /// Tabulates optimize_isub at every node. p_points counts the positive
    /// geometric powers (P = 0 is prepended). Node evaluations are pure and
    /// may be spread over `jobs` threads; the result is independent of the
    /// schedule.
    static IsubGrid build(double p_max, int p_points, int v_points, double noise_var,
                          const MiOptions& options = {}, int jobs = 1);

    double interpolate(double power, double v) const;

    const std::vector<double>& p_axis() const { return p_axis_; }
    const std::vector<double>& v_axis() const { return v_axis_; }
    double value_at(std::size_t pi, std::size_t vi) const {
        return values_[pi * v_axis_.size() + vi];
    }
    double p_max() const { return p_axis_.back(); }
    double noise_var() const { return noise_var_; }
    RateUnit rate_unit() const { return rate_unit_; }
    const std::string& config_hash() const { return config_hash_; }
    void set_config_hash(std::string hash) { config_hash_ = std::move(hash); }

    /// Plain-text serialization; see docs/grid-format.md. Identical grids
    /// serialize to identical bytes.
    void save(std::ostream& out) const;
    static IsubGrid load(std::istream& in);

  private:
    std::vector<double> p_axis_;
    std::vector<double> v_axis_;
    std::vector<double> values_;  // row-major, p major
    double noise_var_ = 1.0;
    RateUnit rate_unit_ = RateUnit::bits;
    std::string config_hash_ = "-";
};

}  // namespace psam
