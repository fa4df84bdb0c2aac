// SPDX-License-Identifier: Apache-2.0
#include "psam/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace psam {

namespace {

constexpr double kGolden = 0.6180339887498949;

double checked_noise(const IsubGrid& grid, double noise_var) {
    if (std::abs(grid.noise_var() - noise_var) > 1e-12 * std::max(1.0, noise_var))
        throw std::invalid_argument("frame_rate: grid was built for a different noise level");
    return noise_var;
}

// Bilinear I_sub lookup with the v coordinate of every data slot resolved
// once; only the P coordinate changes inside allocation loops.
class SlotInterp {
  public:
    SlotInterp(const IsubGrid& grid, const std::vector<double>& variances) : grid_(&grid) {
        const auto& v_axis = grid.v_axis();
        vi_.reserve(variances.size());
        vfrac_.reserve(variances.size());
        for (double v : variances) {
            if (!(v >= v_axis.front() && v <= v_axis.back()))
                throw std::domain_error("frame_rate: error variance out of grid range");
            std::size_t hi = v >= v_axis.back()
                                 ? v_axis.size() - 1
                                 : static_cast<std::size_t>(
                                       std::upper_bound(v_axis.begin(), v_axis.end(), v) -
                                       v_axis.begin());
            if (hi == v_axis.size() - 1 && v == v_axis.back()) {
                vi_.push_back(hi - 1);
                vfrac_.push_back(1.0);
                continue;
            }
            const std::size_t lo = hi - 1;
            const double span = v_axis[hi] - v_axis[lo];
            vi_.push_back(lo);
            vfrac_.push_back(span > 0.0 ? (v - v_axis[lo]) / span : 0.0);
        }
    }

    double isub(std::size_t slot, double power) const {
        const auto& p_axis = grid_->p_axis();
        if (!(power >= p_axis.front() && power <= p_axis.back()))
            throw std::domain_error("frame_rate: data power out of grid range");
        std::size_t hi;
        double a;
        if (power == p_axis.back()) {
            hi = p_axis.size() - 1;
            a = 1.0;
        } else {
            hi = static_cast<std::size_t>(
                std::upper_bound(p_axis.begin(), p_axis.end(), power) - p_axis.begin());
            const double span = p_axis[hi] - p_axis[hi - 1];
            a = span > 0.0 ? (power - p_axis[hi - 1]) / span : 0.0;
        }
        const std::size_t pi = hi - 1;
        const double b = vfrac_[slot];
        const std::size_t vi = vi_[slot];
        const double f00 = grid_->value_at(pi, vi), f10 = grid_->value_at(pi + 1, vi);
        const double f01 = grid_->value_at(pi, vi + 1), f11 = grid_->value_at(pi + 1, vi + 1);
        return (1.0 - a) * (1.0 - b) * f00 + a * (1.0 - b) * f10 + (1.0 - a) * b * f01 +
               a * b * f11;
    }

  private:
    const IsubGrid* grid_;
    std::vector<std::size_t> vi_;
    std::vector<double> vfrac_;
};

struct SearchContext {
    const FadingModel& model;
    double p_avg;
    double noise_var;
    const IsubGrid& grid;
    const PolicySearch& search;

    double pilot_cap() const {
        return search.papr_cap ? *search.papr_cap * p_avg
                               : std::numeric_limits<double>::infinity();
    }
    PilotPattern pattern(int k, int t, std::vector<double> powers) const {
        return PilotPattern{t, k, search.mode, std::move(powers)};
    }
};

struct Candidate {
    FramePlan plan;
    double rate = -1.0;
    bool valid() const { return rate >= 0.0; }
};

// Keeps the first candidate among equals: callers iterate k ascending then T
// ascending, which realizes the smaller-k-then-smaller-T tie break.
void consider(Candidate& best, FramePlan plan, double rate) {
    if (rate > best.rate) best = Candidate{std::move(plan), rate};
}

double plan_rate(const SearchContext& ctx, const FramePlan& plan) {
    return frame_rate(plan, ctx.model, ctx.noise_var, ctx.grid);
}

// One pass of pairwise power transfers of size delta between data slots.
// gains caches isub(i, powers[i]) and total their sum. Returns whether any
// transfer improved the objective.
bool data_transfer_sweep(const SlotInterp& interp, std::vector<double>& powers,
                         std::vector<double>& gains, double& total, double power_max,
                         double delta) {
    const std::size_t n = powers.size();
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (powers[i] < delta) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || powers[j] + delta > power_max) continue;
            const double gi = interp.isub(i, powers[i] - delta);
            const double gj = interp.isub(j, powers[j] + delta);
            const double gain = gi + gj - gains[i] - gains[j];
            if (gain > 1e-12) {
                powers[i] -= delta;
                powers[j] += delta;
                gains[i] = gi;
                gains[j] = gj;
                total += gain;
                improved = true;
                if (powers[i] < delta) break;
            }
        }
    }
    return improved;
}

// Maximize sum_i isub(i, P_i) over P >= 0 with fixed total, by pairwise
// transfers on a shrinking step ladder. The allocation starts flat, so the
// result never falls below the flat (Policy II style) value.
double ascend_data_powers(const SlotInterp& interp, std::vector<double>& powers,
                          double power_max, double delta_min) {
    const std::size_t n = powers.size();
    std::vector<double> gains(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        gains[i] = interp.isub(i, powers[i]);
        total += gains[i];
    }
    if (n < 2) return total;

    const double budget = std::accumulate(powers.begin(), powers.end(), 0.0);
    double delta = std::max(budget / static_cast<double>(n) * 0.5, delta_min);
    while (delta >= delta_min) {
        for (int sweep = 0; sweep < 60; ++sweep)
            if (!data_transfer_sweep(interp, powers, gains, total, power_max, delta)) break;
        delta *= 0.5;
    }
    return total;
}

// Golden-section refinement of a scalar objective after a coarse scan.
template <typename F>
std::pair<double, double> line_search(F&& objective, double lo, double hi, int scan_points,
                                      int golden_iters) {
    double best_x = lo, best_f = -std::numeric_limits<double>::infinity();
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(scan_points));
    const double ratio = hi / lo;
    for (int i = 0; i < scan_points; ++i) {
        const double frac = scan_points == 1 ? 1.0 : static_cast<double>(i) / (scan_points - 1);
        xs.push_back(lo * std::pow(ratio, frac));
    }
    std::size_t best_i = 0;
    std::vector<double> fs(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fs[i] = objective(xs[i]);
        if (fs[i] > best_f) {
            best_f = fs[i];
            best_x = xs[i];
            best_i = i;
        }
    }

    double a = best_i > 0 ? xs[best_i - 1] : xs[best_i];
    double b = best_i + 1 < xs.size() ? xs[best_i + 1] : xs[best_i];
    double x1 = b - kGolden * (b - a), x2 = a + kGolden * (b - a);
    double f1 = objective(x1), f2 = objective(x2);
    for (int it = 0; it < golden_iters; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = objective(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = objective(x1);
        }
    }
    const double mid = 0.5 * (a + b), fmid = objective(mid);
    if (fmid > best_f) {
        best_f = fmid;
        best_x = mid;
    }
    if (f1 > best_f) {
        best_f = f1;
        best_x = x1;
    }
    if (f2 > best_f) {
        best_f = f2;
        best_x = x2;
    }
    return {best_x, best_f};
}

// Iterate T with early stopping once the rate has decreased for
// search.t_patience consecutive spacings.
template <typename EvalT>
void scan_spacing(const SearchContext& ctx, int k, EvalT&& eval_at_t) {
    double prev = -std::numeric_limits<double>::infinity();
    int streak = 0;
    for (int t = k + 1; t <= ctx.search.t_max; ++t) {
        const double rate = eval_at_t(t);
        streak = rate < prev ? streak + 1 : 0;
        prev = rate;
        if (streak >= ctx.search.t_patience) break;
    }
}

std::vector<int> k_range(const SearchContext& ctx) {
    if (ctx.search.forced_k) return {*ctx.search.forced_k};
    std::vector<int> ks(static_cast<std::size_t>(ctx.search.k_max));
    std::iota(ks.begin(), ks.end(), 1);
    return ks;
}

// Feasible pilot-level interval for flat-pilot policies at (k, T): keeps the
// flat data level inside the grid and respects the PAPR cap.
bool pilot_level_bounds(const SearchContext& ctx, int k, int t, double& lo, double& hi) {
    hi = std::min(t * ctx.p_avg / k, ctx.pilot_cap());
    const double pmax = ctx.grid.p_max();
    lo = std::max(hi * 1e-6, (t * ctx.p_avg - (t - k) * pmax) / k);
    return lo < hi;
}

PolicyResult finalize(const SearchContext& ctx, PolicyId id, Candidate best) {
    PolicyResult result;
    result.policy_id = id;
    result.baseline_rate = no_training_baseline(ctx.p_avg, ctx.noise_var, ctx.grid);
    if (!best.valid()) return result;
    result.plan = std::move(best.plan);
    result.rate = plan_rate(ctx, result.plan);
    result.training_beneficial = result.rate > result.baseline_rate;
    if (ctx.search.fill_slot_inputs) {
        const auto profile =
            error_variance_profile(ctx.model, result.plan.pattern, ctx.noise_var);
        MiOptions mi = ctx.search.mi;
        mi.unit = ctx.grid.rate_unit();
        result.per_slot_inputs.reserve(result.plan.data_powers.size());
        for (std::size_t i = 0; i < result.plan.data_powers.size(); ++i)
            result.per_slot_inputs.push_back(
                optimize_isub(result.plan.data_powers[i], profile.variances[i],
                              ctx.noise_var, mi)
                    .input);
    }
    return result;
}

FramePlan flat_plan(const SearchContext& ctx, int k, int t, double pilot_level,
                    double data_level) {
    FramePlan plan;
    plan.pattern = ctx.pattern(k, t, std::vector<double>(static_cast<std::size_t>(k),
                                                         pilot_level));
    plan.data_powers.assign(static_cast<std::size_t>(t - k), data_level);
    return plan;
}

Candidate search_policy_II(const SearchContext& ctx) {
    Candidate best;
    for (int k : k_range(ctx)) {
        scan_spacing(ctx, k, [&](int t) {
            double lo, hi;
            if (!pilot_level_bounds(ctx, k, t, lo, hi)) return -1.0;
            const auto objective = [&](double p_tr) {
                const double p_d = (t * ctx.p_avg - k * p_tr) / (t - k);
                return plan_rate(ctx, flat_plan(ctx, k, t, p_tr, std::max(p_d, 0.0)));
            };
            const auto [p_tr, rate] = line_search(objective, lo, hi, 32, 48);
            const double p_d = std::max((t * ctx.p_avg - k * p_tr) / (t - k), 0.0);
            consider(best, flat_plan(ctx, k, t, p_tr, p_d), rate);
            return rate;
        });
    }
    return best;
}

// Policy III inner step: flat pilots at p_tr, data powers ascended from the
// flat split. Returns the frame rate and (optionally) the allocation.
double policy_III_rate(const SearchContext& ctx, int k, int t, double p_tr, double delta_min,
                       std::vector<double>* out_powers) {
    const double budget_d = std::max(t * ctx.p_avg - k * p_tr, 0.0);
    const int n = t - k;
    PilotPattern pattern = ctx.pattern(k, t, std::vector<double>(static_cast<std::size_t>(k), p_tr));
    const auto profile = error_variance_profile(ctx.model, pattern, ctx.noise_var);
    SlotInterp interp(ctx.grid, profile.variances);
    std::vector<double> powers(static_cast<std::size_t>(n), budget_d / n);
    const double sum = ascend_data_powers(interp, powers, ctx.grid.p_max(), delta_min);
    if (out_powers) *out_powers = std::move(powers);
    return sum / t;
}

Candidate search_policy_III(const SearchContext& ctx, const std::vector<int>& ks) {
    Candidate best;
    struct Winner {
        int k = 0, t = 0;
        double p_tr = 0.0;
    } winner;
    double winner_rate = -1.0;

    for (int k : ks) {
        scan_spacing(ctx, k, [&](int t) {
            double lo, hi;
            if (!pilot_level_bounds(ctx, k, t, lo, hi)) return -1.0;
            const auto objective = [&](double p_tr) {
                return policy_III_rate(ctx, k, t, p_tr, ctx.search.ascent_delta_min_scan,
                                       nullptr);
            };
            const auto [p_tr, rate] = line_search(objective, lo, hi, 16, 24);
            if (rate > winner_rate) {
                winner_rate = rate;
                winner = {k, t, p_tr};
            }
            return rate;
        });
    }
    if (winner_rate < 0.0) return best;

    // Seed with the flat-data optimum so the result can only improve on
    // Policy II, then polish the winner at the fine tier.
    Candidate flat = search_policy_II(ctx);
    if (flat.valid()) {
        const int k = flat.plan.pattern.cluster_k, t = flat.plan.pattern.spacing_T;
        std::vector<double> powers;
        const double rate = policy_III_rate(ctx, k, t, flat.plan.pattern.pilot_powers[0],
                                            ctx.search.ascent_delta_min_final, &powers);
        FramePlan plan;
        plan.pattern = flat.plan.pattern;
        plan.data_powers = std::move(powers);
        consider(best, std::move(plan), rate);
    }
    {
        std::vector<double> powers;
        const double rate = policy_III_rate(ctx, winner.k, winner.t, winner.p_tr,
                                            ctx.search.ascent_delta_min_final, &powers);
        FramePlan plan;
        plan.pattern = ctx.pattern(winner.k, winner.t,
                                   std::vector<double>(static_cast<std::size_t>(winner.k),
                                                       winner.p_tr));
        plan.data_powers = std::move(powers);
        consider(best, std::move(plan), rate);
    }
    return best;
}

// Joint ascent over every slot of the frame (pilots and data) with the
// average-power budget fixed. Pilot moves re-solve the estimator; data-data
// moves reuse the cached profile.
double joint_ascend(const SearchContext& ctx, int k, int t, std::vector<double>& pilots,
                    std::vector<double>& data, double delta_min) {
    const double pmax = ctx.grid.p_max();
    const double cap = ctx.pilot_cap();
    const std::size_t n = data.size();
    const std::size_t nk = static_cast<std::size_t>(k);

    const auto make_interp = [&](const std::vector<double>& pil) {
        const auto profile =
            error_variance_profile(ctx.model, ctx.pattern(k, t, pil), ctx.noise_var);
        return SlotInterp(ctx.grid, profile.variances);
    };
    const auto refresh = [&](const SlotInterp& itp, std::vector<double>& gains) {
        gains.resize(n);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gains[i] = itp.isub(i, data[i]);
            sum += gains[i];
        }
        return sum;
    };

    SlotInterp interp = make_interp(pilots);
    std::vector<double> gains;
    double total = refresh(interp, gains);

    double delta = std::max(ctx.p_avg * 0.5, delta_min);
    while (delta >= delta_min) {
        for (int sweep = 0; sweep < 40; ++sweep) {
            bool improved = data_transfer_sweep(interp, data, gains, total, pmax, delta);

            // transfers with at least one pilot endpoint
            for (std::size_t from = 0; from < nk + n; ++from) {
                const bool from_pilot = from < nk;
                double& from_power = from_pilot ? pilots[from] : data[from - nk];
                if (from_power < delta) continue;
                for (std::size_t to = 0; to < nk + n; ++to) {
                    if (to == from) continue;
                    const bool to_pilot = to < nk;
                    if (!from_pilot && !to_pilot) continue;  // handled above
                    double& to_power = to_pilot ? pilots[to] : data[to - nk];
                    if (to_power + delta > (to_pilot ? cap : pmax)) continue;

                    from_power -= delta;
                    to_power += delta;
                    SlotInterp trial_interp = make_interp(pilots);
                    std::vector<double> trial_gains;
                    const double trial = refresh(trial_interp, trial_gains);
                    if (trial > total + 1e-12) {
                        total = trial;
                        interp = std::move(trial_interp);
                        gains = std::move(trial_gains);
                        improved = true;
                        if (from_power < delta) break;
                    } else {
                        from_power += delta;
                        to_power -= delta;
                    }
                }
            }
            if (!improved) break;
        }
        delta *= 0.5;
    }
    return total / t;
}

Candidate search_policy_IV_joint(const SearchContext& ctx) {
    Candidate best;
    for (int k : k_range(ctx)) {
        scan_spacing(ctx, k, [&](int t) {
            double lo, hi;
            if (!pilot_level_bounds(ctx, k, t, lo, hi)) return -1.0;
            // Flat-pilot line search supplies the starting point.
            const auto flat_objective = [&](double p_tr) {
                const double p_d = (t * ctx.p_avg - k * p_tr) / (t - k);
                return plan_rate(ctx, flat_plan(ctx, k, t, p_tr, std::max(p_d, 0.0)));
            };
            const auto [p_tr, flat_rate] = line_search(flat_objective, lo, hi, 16, 16);
            (void)flat_rate;

            std::vector<double> pilots(static_cast<std::size_t>(k), p_tr);
            std::vector<double> data(static_cast<std::size_t>(t - k),
                                     std::max((t * ctx.p_avg - k * p_tr) / (t - k), 0.0));
            const double rate =
                joint_ascend(ctx, k, t, pilots, data, ctx.search.ascent_delta_min_scan);

            FramePlan plan;
            plan.pattern = ctx.pattern(k, t, pilots);
            plan.data_powers = data;
            consider(best, std::move(plan), rate);
            return rate;
        });
    }
    if (best.valid()) {
        // Polish the winner at the fine tier.
        const int k = best.plan.pattern.cluster_k, t = best.plan.pattern.spacing_T;
        std::vector<double> pilots = best.plan.pattern.pilot_powers;
        std::vector<double> data = best.plan.data_powers;
        const double rate =
            joint_ascend(ctx, k, t, pilots, data, ctx.search.ascent_delta_min_final);
        FramePlan plan;
        plan.pattern = ctx.pattern(k, t, pilots);
        plan.data_powers = data;
        consider(best, std::move(plan), rate);
    }
    return best;
}

void normalize_budget(FramePlan& plan, double p_avg) {
    const double total = plan.total_power();
    const double target = plan.pattern.spacing_T * p_avg;
    if (total <= 0.0 || target <= 0.0) return;
    const double scale = target / total;
    if (std::abs(scale - 1.0) > 1e-15 && std::abs(scale - 1.0) < 1e-6) {
        for (double& p : plan.pattern.pilot_powers) p *= scale;
        for (double& p : plan.data_powers) p *= scale;
    }
}

}  // namespace

double FramePlan::total_power() const {
    return std::accumulate(pattern.pilot_powers.begin(), pattern.pilot_powers.end(), 0.0) +
           std::accumulate(data_powers.begin(), data_powers.end(), 0.0);
}

double frame_rate(const FramePlan& plan, const FadingModel& model, double noise_var,
                  const IsubGrid& grid) {
    checked_noise(grid, noise_var);
    plan.pattern.validate();
    const int t = plan.pattern.spacing_T, k = plan.pattern.cluster_k;
    if (plan.data_powers.size() != static_cast<std::size_t>(t - k))
        throw std::invalid_argument("frame_rate: data_powers size must be T - k");
    const auto profile = error_variance_profile(model, plan.pattern, noise_var);
    SlotInterp interp(grid, profile.variances);
    double sum = 0.0;
    for (std::size_t i = 0; i < plan.data_powers.size(); ++i)
        sum += interp.isub(i, plan.data_powers[i]);
    return sum / t;
}

double no_training_baseline(double p_avg, double noise_var, const IsubGrid& grid) {
    checked_noise(grid, noise_var);
    return grid.interpolate(p_avg, 1.0);
}

PolicyResult optimize_policy_I(const FadingModel& model, double p_avg, double noise_var,
                               const IsubGrid& grid, const PolicySearch& search) {
    SearchContext ctx{model, p_avg, noise_var, grid, search};
    Candidate best;
    for (int k : k_range(ctx)) {
        scan_spacing(ctx, k, [&](int t) {
            FramePlan plan = flat_plan(ctx, k, t, p_avg, p_avg);
            const double rate = plan_rate(ctx, plan);
            consider(best, std::move(plan), rate);
            return rate;
        });
    }
    return finalize(ctx, PolicyId::I, std::move(best));
}

PolicyResult optimize_policy_II(const FadingModel& model, double p_avg, double noise_var,
                                const IsubGrid& grid, const PolicySearch& search) {
    if (search.papr_cap && !(*search.papr_cap > 0.0))
        throw std::invalid_argument("papr_cap must be positive");
    SearchContext ctx{model, p_avg, noise_var, grid, search};
    return finalize(ctx, PolicyId::II, search_policy_II(ctx));
}

PolicyResult optimize_policy_III(const FadingModel& model, double p_avg, double noise_var,
                                 const IsubGrid& grid, const PolicySearch& search) {
    SearchContext ctx{model, p_avg, noise_var, grid, search};
    Candidate best = search_policy_III(ctx, k_range(ctx));
    if (best.valid()) normalize_budget(best.plan, p_avg);
    return finalize(ctx, PolicyId::III, std::move(best));
}

PolicyResult optimize_policy_IV(const FadingModel& model, double p_avg, double noise_var,
                                const IsubGrid& grid, const PolicySearch& search) {
    if (search.papr_cap && !(*search.papr_cap > 0.0))
        throw std::invalid_argument("papr_cap must be positive");
    SearchContext ctx{model, p_avg, noise_var, grid, search};
    Candidate best;
    const bool theorem_shortcut =
        search.mode == EstimationMode::causal && !search.papr_cap && !search.forced_k;
    if (theorem_shortcut) {
        // All training power belongs on the single last pilot, so the search
        // reduces to one pilot with free power: Policy III restricted to k=1.
        best = search_policy_III(ctx, {1});
    } else {
        best = search_policy_IV_joint(ctx);
    }
    if (best.valid()) normalize_budget(best.plan, p_avg);
    return finalize(ctx, PolicyId::IV, std::move(best));
}

PolicyResult optimize_policy(PolicyId id, const FadingModel& model, double p_avg,
                             double noise_var, const IsubGrid& grid,
                             const PolicySearch& search) {
    switch (id) {
        case PolicyId::I: return optimize_policy_I(model, p_avg, noise_var, grid, search);
        case PolicyId::II: return optimize_policy_II(model, p_avg, noise_var, grid, search);
        case PolicyId::III: return optimize_policy_III(model, p_avg, noise_var, grid, search);
        case PolicyId::IV: return optimize_policy_IV(model, p_avg, noise_var, grid, search);
    }
    throw std::invalid_argument("unknown policy id");
}

}  // namespace psam
