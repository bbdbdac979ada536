#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace spreadnet {

/// EGARCH(1,1) with a constant conditional mean and optional exogenous
/// variance covariates:
///   r_t = mu + eps_t,   eps_t = sigma_t * eta_t,  eta_t ~ N(0,1)
///   ln sigma_t^2 = omega0 + omega*eta_{t-1} + gamma*|eta_{t-1}|
///                + tau*ln sigma_{t-1}^2 + sum_l lambda_l x_{l,t}
/// The |eta| term is uncentered, so omega0 absorbs gamma*E|eta|.
struct EgarchParams {
    double mu = 0.0;
    double omega0 = 0.0;
    double omega = 0.0;
    double gamma = 0.0;
    double tau = 0.0;
    std::vector<double> lambda;

    std::size_t count() const { return 5 + lambda.size(); }
    std::vector<double> pack() const;
    static EgarchParams unpack(std::span<const double> v, std::size_t n_covariates);
};

/// Parameter names in reporting order: mu, omega0, omega, gamma, tau,
/// then one per covariate.
std::vector<std::string> egarch_param_names(const std::vector<std::string>& covariate_names);

struct EgarchLoglik {
    double loglik = 0.0;
    std::vector<double> sigma2;
    bool finite = false; // false when the variance recursion overflowed
};

/// Gaussian log-likelihood and fitted conditional variances. Pre-sample
/// state: sigma^2 = sample variance of returns, eta = 0. `covariates` may be
/// null (Model 0) or n x m, row t aligned with returns[t].
EgarchLoglik egarch_loglik(const EgarchParams& params, std::span<const double> returns,
                           const Eigen::MatrixXd* covariates);

struct EgarchFitOptions {
    int max_evals = 60000;
    double tau_bound = 0.999; // |tau| kept inside by a tanh transform
};

struct EgarchFit {
    EgarchParams params;
    std::vector<double> std_errors; // NaN when unavailable
    bool std_errors_available = false;
    double loglik = 0.0;
    double aic_norm = 0.0; // (-2*ll + 2k) / n
    double bic_norm = 0.0; // (-2*ll + k*ln n) / n
    std::vector<double> sigma2;
    bool converged = false;
    std::size_t n = 0;
    std::size_t k = 0; // estimated parameter count
};

/// Maximum likelihood from the documented start point (omega0 = ln sample
/// variance, omega = 0, gamma = 0.1, tau = 0.9, lambdas = 0) via Nelder-Mead
/// with one polishing restart. Standard errors come from the inverse
/// numerical Hessian; a singular Hessian leaves them flagged unavailable.
EgarchFit fit_egarch(std::span<const double> returns, const Eigen::MatrixXd* covariates,
                     const EgarchFitOptions& options = {});

struct ComparisonRow {
    std::string parameter;
    double coef0 = 0.0, t0 = 0.0;
    double coefX = 0.0, tX = 0.0;
    bool in_model0 = false, in_modelX = false;
    bool t0_valid = false, tX_valid = false;
};

struct EgarchComparison {
    std::vector<ComparisonRow> rows;
    double loglik0 = 0.0, loglikX = 0.0;
    double aic0 = 0.0, aicX = 0.0;
    double bic0 = 0.0, bicX = 0.0;
};

/// Side-by-side coefficient/t-value table in the Model X vs Model 0 layout.
EgarchComparison compare_models(const EgarchFit& fit0, const EgarchFit& fitX,
                                const std::vector<std::string>& covariate_names);

} // namespace spreadnet
