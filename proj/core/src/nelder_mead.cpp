// Copyright 2026 The fockhom Authors
// SPDX-License-Identifier: Apache-2.0

#include "fockhom/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fockhom {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, const NelderMeadOptions& options) {
    const std::size_t n = start.size();
    std::vector<std::vector<double>> pts(n + 1, start);
    std::vector<double> vals(n + 1);
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i < n; ++i) {
        pts[i + 1][i] += options.initial_step;
    }
    for (std::size_t i = 0; i <= n; ++i) {
        vals[i] = eval(pts[i]);
    }
    std::vector<std::size_t> order(n + 1);
    bool converged = false;
    while (evals < options.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[n - 1];

        double spread = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            for (std::size_t d = 0; d < n; ++d) {
                spread = std::max(spread, std::abs(pts[i][d] - pts[best][d]));
            }
        }
        if (std::abs(vals[worst] - vals[best]) <= options.f_tolerance && spread <= options.x_tolerance) {
            converged = true;
            break;
        }
        if (spread <= options.x_tolerance * 1e-3) {
            converged = true;
            break;
        }

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == worst) {
                continue;
            }
            for (std::size_t d = 0; d < n; ++d) {
                centroid[d] += pts[i][d] / static_cast<double>(n);
            }
        }
        auto along = [&](double t) {
            std::vector<double> x(n);
            for (std::size_t d = 0; d < n; ++d) {
                x[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
            }
            return x;
        };

        auto xr = along(-1.0);
        double fr = eval(xr);
        if (fr < vals[best]) {
            auto xe = along(-2.0);
            double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        auto xc = along(outside ? -0.5 : 0.5);
        double fc = eval(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == best) {
                continue;
            }
            for (std::size_t d = 0; d < n; ++d) {
                pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
            }
            vals[i] = eval(pts[i]);
        }
    }
    std::size_t best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    return {pts[best], vals[best], evals, converged};
}

}  // namespace fockhom
