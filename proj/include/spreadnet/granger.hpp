#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spreadnet {

struct OlsFit {
    Eigen::VectorXd beta;
    double rss = 0.0;
    long rank = 0;
};

/// Least squares via rank-revealing Householder QR. Minimizes ||y - X b||
/// even when X is rank-deficient; residuals are orthogonal to the design
/// columns to within 1e-8 relative.
OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct GrangerResult {
    std::string x_name;
    std::string y_name;
    int lag_order = 0;
    double rss_restricted = 0.0;
    double rss_unrestricted = 0.0;
    double f_stat = 0.0;
    double p_value = 1.0;
    std::size_t n_effective = 0; // regression rows actually used
};

/// Univariate Granger test of x -> y at lag order d: OLS, intercept plus y
/// lags 1..d (restricted) and additionally x lags 1..d (unrestricted).
/// F = ((RSS_r - RSS_u)/d) / (RSS_u/(n_eff - 2d - 1)), p from F(d, n_eff-2d-1).
/// Throws SingularDesign when the restricted design is rank-deficient and
/// DegenerateInput when there are too few rows for the requested order.
GrangerResult granger_test(std::span<const double> y, std::span<const double> x, int lag_order);

/// Named series with an availability mask (heads of standardized series are
/// unavailable; those rows are dropped listwise before lagging).
struct MaskedSeries {
    std::string name;
    std::vector<double> values;
    std::vector<char> available; // empty means all available
};

struct SweepCell {
    std::string covariate;
    std::string target;
    int lag = 0;
    std::optional<GrangerResult> result;
    std::string note;         // reason when result is empty
    bool significant = false; // p < alpha
};

/// Grid of Granger tests: every covariate x lag 1..max_lag x target.
/// Per-cell failures are recorded, not thrown.
std::vector<SweepCell> causality_sweep(const std::vector<MaskedSeries>& targets,
                                       const std::vector<MaskedSeries>& covariates, int max_lag,
                                       double alpha = 0.10);

} // namespace spreadnet
