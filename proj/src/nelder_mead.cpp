#include "spreadnet/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spreadnet {

namespace {

constexpr double kBad = 1e300;

double clean(double f) { return std::isfinite(f) ? f : kBad; }

} // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, const NelderMeadOptions& options) {
    const std::size_t n = x0.size();
    NelderMeadResult result;
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return clean(objective(x));
    };

    // simplex: n+1 vertices
    std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(x0.begin(), x0.end()));
    for (std::size_t i = 0; i < n; ++i) {
        const double step = options.initial_step.empty()
                                ? 0.1 * std::max(1.0, std::abs(x0[i]))
                                : options.initial_step[i];
        simplex[i + 1][i] += step;
    }
    std::vector<double> fval(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fval[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        for (std::size_t i = 0; i <= n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return fval[a] != fval[b] ? fval[a] < fval[b] : a < b;
        });
    };

    constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
    std::vector<double> centroid(n), xr(n), xe(n), xc(n);
    bool converged = false;

    while (evals < options.max_evals) {
        sort_simplex();
        const std::size_t best = order[0], worst = order[n], second_worst = order[n - 1];

        const double spread = fval[worst] - fval[best];
        if (spread <= options.f_tol * (std::abs(fval[best]) + 1e-12) && fval[best] < kBad) {
            converged = true;
            break;
        }

        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i <= n; ++i) {
                if (i != worst) s += simplex[i][j];
            }
            centroid[j] = s / double(n);
        }

        for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - simplex[worst][j]);
        const double fr = eval(xr);

        if (fr < fval[best]) {
            for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + gamma * (centroid[j] - simplex[worst][j]);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[worst] = xe;
                fval[worst] = fe;
            } else {
                simplex[worst] = xr;
                fval[worst] = fr;
            }
        } else if (fr < fval[second_worst]) {
            simplex[worst] = xr;
            fval[worst] = fr;
        } else {
            const bool outside = fr < fval[worst];
            const std::vector<double>& toward = outside ? xr : simplex[worst];
            for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + rho * (toward[j] - centroid[j]);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fval[worst])) {
                simplex[worst] = xc;
                fval[worst] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 0; i <= n; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
                    }
                    fval[i] = eval(simplex[i]);
                }
            }
        }
    }

    sort_simplex();
    result.x = simplex[order[0]];
    result.f = fval[order[0]];
    result.evals = evals;
    result.converged = converged;
    return result;
}

} // namespace spreadnet
