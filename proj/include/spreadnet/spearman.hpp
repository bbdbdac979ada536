#pragma once

#include <span>
#include <string>
#include <vector>

namespace spreadnet {

/// Average (fractional) ranks, 1-based; ties share the mean of their ranks.
std::vector<double> average_ranks(std::span<const double> x);

struct SpearmanResult {
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
};

/// Tie-corrected rank correlation (Pearson on average ranks) with a
/// two-sided p-value from t = rho*sqrt((n-2)/(1-rho^2)), n-2 dof.
/// Throws DegenerateInput for constant vectors or n < 3.
SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

struct LagCorrelation {
    std::string x_name;
    std::string y_name;
    int lag = 0;
    double rho = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    bool defined = false; // false when the lag's sample was degenerate
};

/// rho/p per lag 0..max_lag for pairs (x_{t-lag}, y_t); pairs with either
/// side unavailable are dropped. Degenerate lags come back defined=false.
std::vector<LagCorrelation> lagged_correlations(std::span<const double> x,
                                                std::span<const char> x_available,
                                                std::span<const double> y,
                                                std::span<const char> y_available, int max_lag);

} // namespace spreadnet
