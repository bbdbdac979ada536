#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spreadnet {

struct NelderMeadOptions {
    int max_evals = 20000;
    double f_tol = 1e-9; // relative simplex spread at convergence
    std::vector<double> initial_step; // per-coordinate; empty => 0.1*max(1,|x0|)
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Downhill simplex minimizer. The objective may return +inf / NaN for
/// infeasible points; such vertices are treated as arbitrarily bad.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::span<const double> x0, const NelderMeadOptions& options = {});

} // namespace spreadnet
