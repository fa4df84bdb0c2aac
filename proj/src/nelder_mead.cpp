// SPDX-License-Identifier: Apache-2.0
#include "psam/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace psam {

NelderMeadResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                      const std::vector<double>& start,
                                      const std::vector<double>& step,
                                      const NelderMeadOptions& options) {
    const auto n = start.size();
    if (n == 0 || step.size() != n)
        throw std::invalid_argument("nelder_mead_minimize: bad start/step dimensions");

    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<std::vector<double>> x(n + 1, start);
    for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += step[i];
    std::vector<double> fx(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fx[i] = f(x[i]);

    std::vector<std::size_t> order(n + 1);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> centroid(n), trial(n), trial2(n);

    int it = 0;
    for (; it < options.max_iter; ++it) {
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
        const std::size_t best = order[0], worst = order[n], second = order[n - 1];
        if (std::abs(fx[worst] - fx[best]) <= options.f_tol) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) centroid[j] += x[order[i]][j];
        for (double& c : centroid) c /= static_cast<double>(n);

        for (std::size_t j = 0; j < n; ++j)
            trial[j] = centroid[j] + alpha * (centroid[j] - x[worst][j]);
        const double f_reflect = f(trial);

        if (f_reflect < fx[best]) {
            for (std::size_t j = 0; j < n; ++j)
                trial2[j] = centroid[j] + gamma * (trial[j] - centroid[j]);
            const double f_expand = f(trial2);
            if (f_expand < f_reflect) {
                x[worst] = trial2;
                fx[worst] = f_expand;
            } else {
                x[worst] = trial;
                fx[worst] = f_reflect;
            }
            continue;
        }
        if (f_reflect < fx[second]) {
            x[worst] = trial;
            fx[worst] = f_reflect;
            continue;
        }

        if (f_reflect < fx[worst]) {
            for (std::size_t j = 0; j < n; ++j)
                trial2[j] = centroid[j] + rho * (trial[j] - centroid[j]);
        } else {
            for (std::size_t j = 0; j < n; ++j)
                trial2[j] = centroid[j] + rho * (x[worst][j] - centroid[j]);
        }
        const double f_contract = f(trial2);
        if (f_contract < std::min(f_reflect, fx[worst])) {
            x[worst] = trial2;
            fx[worst] = f_contract;
            continue;
        }

        for (std::size_t i = 1; i <= n; ++i) {
            auto& xi = x[order[i]];
            for (std::size_t j = 0; j < n; ++j)
                xi[j] = x[order[0]][j] + sigma * (xi[j] - x[order[0]][j]);
            fx[order[i]] = f(xi);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= n; ++i)
        if (fx[i] < fx[best]) best = i;
    return NelderMeadResult{x[best], fx[best], it};
}

}  // namespace psam
