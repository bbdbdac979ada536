#include "spreadnet/egarch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spreadnet/errors.hpp"
#include "spreadnet/nelder_mead.hpp"

namespace spreadnet {

namespace {

constexpr double kLogSigma2Cap = 100.0; // |ln sigma^2| beyond this: overflow

double sample_variance(std::span<const double> r) {
    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= double(r.size());
    double ss = 0.0;
    for (double v : r) ss += (v - mean) * (v - mean);
    return ss / double(r.size() - 1);
}

} // namespace

std::vector<double> EgarchParams::pack() const {
    std::vector<double> v = {mu, omega0, omega, gamma, tau};
    v.insert(v.end(), lambda.begin(), lambda.end());
    return v;
}

EgarchParams EgarchParams::unpack(std::span<const double> v, std::size_t n_covariates) {
    EgarchParams p;
    p.mu = v[0];
    p.omega0 = v[1];
    p.omega = v[2];
    p.gamma = v[3];
    p.tau = v[4];
    p.lambda.assign(v.begin() + 5, v.begin() + 5 + n_covariates);
    return p;
}

std::vector<std::string> egarch_param_names(const std::vector<std::string>& covariate_names) {
    std::vector<std::string> names = {"mu", "omega0", "omega", "gamma", "tau"};
    names.insert(names.end(), covariate_names.begin(), covariate_names.end());
    return names;
}

EgarchLoglik egarch_loglik(const EgarchParams& params, std::span<const double> returns,
                           const Eigen::MatrixXd* covariates) {
    const std::size_t n = returns.size();
    EgarchLoglik out;
    out.sigma2.assign(n, 0.0);
    if (n < 2) return out;
    if (covariates) {
        if (std::size_t(covariates->rows()) != n ||
            std::size_t(covariates->cols()) != params.lambda.size()) {
            throw Error("egarch_loglik: covariate matrix shape mismatch");
        }
    } else if (!params.lambda.empty()) {
        throw Error("egarch_loglik: lambda set but no covariates given");
    }

    double log_s2_prev = std::log(sample_variance(returns));
    double eta_prev = 0.0;
    constexpr double half_log_2pi = 0.9189385332046727; // ln(2*pi)/2

    double ll = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double log_s2 = params.omega0 + params.omega * eta_prev +
                        params.gamma * std::abs(eta_prev) + params.tau * log_s2_prev;
        if (covariates) {
            for (std::size_t l = 0; l < params.lambda.size(); ++l) {
                log_s2 += params.lambda[l] * (*covariates)(long(t), long(l));
            }
        }
        if (!std::isfinite(log_s2) || std::abs(log_s2) > kLogSigma2Cap) {
            out.loglik = -std::numeric_limits<double>::infinity();
            out.finite = false;
            return out;
        }
        const double s2 = std::exp(log_s2);
        const double eps = returns[t] - params.mu;
        ll += -half_log_2pi - 0.5 * log_s2 - 0.5 * eps * eps / s2;
        out.sigma2[t] = s2;
        eta_prev = eps / std::sqrt(s2);
        log_s2_prev = log_s2;
    }
    out.loglik = ll;
    out.finite = std::isfinite(ll);
    return out;
}

namespace {

/// tau is optimized through tau = bound*tanh(u) to keep the log-variance
/// recursion stationary; everything else is unconstrained.
struct TauTransform {
    double bound;
    double to_tau(double u) const { return bound * std::tanh(u); }
    double to_u(double tau) const {
        const double r = std::clamp(tau / bound, -1.0 + 1e-12, 1.0 - 1e-12);
        return std::atanh(r);
    }
};

std::vector<double> numerical_hessian_diag_se(
    const std::function<double(std::span<const double>)>& loglik, std::vector<double> theta,
    bool& ok) {
    const std::size_t k = theta.size();
    Eigen::MatrixXd H(k, k);
    std::vector<double> h(k);
    for (std::size_t i = 0; i < k; ++i) h[i] = 1e-3 * std::max(0.1, std::abs(theta[i]));

    auto f = [&](const std::vector<double>& x) { return loglik(x); };
    const double f0 = f(theta);
    ok = std::isfinite(f0);
    if (!ok) return std::vector<double>(k, std::nan(""));

    for (std::size_t i = 0; i < k && ok; ++i) {
        for (std::size_t j = i; j < k && ok; ++j) {
            double v = 0.0;
            if (i == j) {
                auto xp = theta, xm = theta;
                xp[i] += h[i];
                xm[i] -= h[i];
                v = (f(xp) - 2.0 * f0 + f(xm)) / (h[i] * h[i]);
            } else {
                auto xpp = theta, xpm = theta, xmp = theta, xmm = theta;
                xpp[i] += h[i]; xpp[j] += h[j];
                xpm[i] += h[i]; xpm[j] -= h[j];
                xmp[i] -= h[i]; xmp[j] += h[j];
                xmm[i] -= h[i]; xmm[j] -= h[j];
                v = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h[i] * h[j]);
            }
            if (!std::isfinite(v)) ok = false;
            H(long(i), long(j)) = v;
            H(long(j), long(i)) = v;
        }
    }
    if (!ok) return std::vector<double>(k, std::nan(""));

    // observed information = -H; SEs from its inverse diagonal
    Eigen::MatrixXd info = -H;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(info);
    if (!lu.isInvertible()) {
        ok = false;
        return std::vector<double>(k, std::nan(""));
    }
    const Eigen::MatrixXd cov = lu.inverse();
    std::vector<double> se(k);
    for (std::size_t i = 0; i < k; ++i) {
        const double v = cov(long(i), long(i));
        if (v <= 0.0 || !std::isfinite(v)) {
            ok = false;
            return std::vector<double>(k, std::nan(""));
        }
        se[i] = std::sqrt(v);
    }
    return se;
}

} // namespace

EgarchFit fit_egarch(std::span<const double> returns, const Eigen::MatrixXd* covariates,
                     const EgarchFitOptions& options) {
    const std::size_t n = returns.size();
    if (n < 30) throw Error("fit_egarch: need at least 30 returns");
    const std::size_t m = covariates ? std::size_t(covariates->cols()) : 0;

    const TauTransform tt{options.tau_bound};

    auto unpack_opt = [&](std::span<const double> v) {
        EgarchParams p = EgarchParams::unpack(v, m);
        p.tau = tt.to_tau(v[4]);
        return p;
    };
    auto objective = [&](std::span<const double> v) {
        const EgarchLoglik ll = egarch_loglik(unpack_opt(v), returns, covariates);
        return ll.finite ? -ll.loglik : std::numeric_limits<double>::infinity();
    };

    double mean_r = 0.0;
    for (double r : returns) mean_r += r;
    mean_r /= double(n);
    const double var_r = sample_variance(returns);

    // Two starts: a persistent one whose recursion is stationary at the
    // sample variance (omega0 = (1 - tau) * ln var, since the fixed point of
    // ln s2 = omega0 + tau * ln s2 is omega0 / (1 - tau)), and an iid one
    // (tau = 0). The better survivor gets polished.
    EgarchParams start_a;
    start_a.mu = mean_r;
    start_a.tau = 0.9;
    start_a.omega0 = (1.0 - start_a.tau) * std::log(var_r);
    start_a.omega = 0.0;
    start_a.gamma = 0.1;
    start_a.lambda.assign(m, 0.0);

    EgarchParams start_b = start_a;
    start_b.tau = 0.0;
    start_b.omega0 = std::log(var_r);

    NelderMeadOptions nm;
    nm.max_evals = options.max_evals;
    nm.f_tol = 1e-10;
    nm.initial_step.assign(5 + m, 0.1);
    nm.initial_step[0] = 0.25 * std::sqrt(var_r) + 1e-6; // mu on the return scale
    nm.initial_step[1] = 0.5;

    const auto run_from = [&](const EgarchParams& start) {
        std::vector<double> x0 = start.pack();
        x0[4] = tt.to_u(start.tau);
        return nelder_mead(objective, x0, nm);
    };
    NelderMeadResult run = run_from(start_a);
    const NelderMeadResult run_b = run_from(start_b);
    if (run_b.f < run.f) run = run_b;

    // polish: restart a fresh tight simplex at the incumbent
    NelderMeadOptions nm2 = nm;
    nm2.initial_step.assign(5 + m, 0.02);
    nm2.initial_step[0] = 0.05 * std::sqrt(var_r) + 1e-7;
    NelderMeadResult polished = nelder_mead(objective, run.x, nm2);
    if (polished.f > run.f) polished = run;

    EgarchFit fit;
    fit.params = unpack_opt(polished.x);
    fit.converged = polished.converged && std::isfinite(polished.f);
    fit.n = n;
    fit.k = fit.params.count();

    const EgarchLoglik final_ll = egarch_loglik(fit.params, returns, covariates);
    fit.loglik = final_ll.loglik;
    fit.sigma2 = final_ll.sigma2;
    fit.aic_norm = (-2.0 * fit.loglik + 2.0 * double(fit.k)) / double(n);
    fit.bic_norm = (-2.0 * fit.loglik + double(fit.k) * std::log(double(n))) / double(n);

    // SEs on the natural parameterization
    auto natural_loglik = [&](std::span<const double> v) {
        const EgarchParams p = EgarchParams::unpack(v, m);
        const EgarchLoglik ll = egarch_loglik(p, returns, covariates);
        return ll.finite ? ll.loglik : -std::numeric_limits<double>::infinity();
    };
    bool se_ok = false;
    fit.std_errors = numerical_hessian_diag_se(natural_loglik, fit.params.pack(), se_ok);
    fit.std_errors_available = se_ok;
    return fit;
}

EgarchComparison compare_models(const EgarchFit& fit0, const EgarchFit& fitX,
                                const std::vector<std::string>& covariate_names) {
    EgarchComparison out;
    const auto names = egarch_param_names(covariate_names);
    const auto coef0 = fit0.params.pack();
    const auto coefX = fitX.params.pack();

    for (std::size_t i = 0; i < names.size(); ++i) {
        ComparisonRow row;
        row.parameter = names[i];
        row.in_modelX = i < coefX.size();
        row.in_model0 = i < 5; // core parameters only
        if (row.in_model0) {
            row.coef0 = coef0[i];
            if (fit0.std_errors_available && fit0.std_errors[i] > 0.0) {
                row.t0 = coef0[i] / fit0.std_errors[i];
                row.t0_valid = true;
            }
        }
        if (row.in_modelX) {
            row.coefX = coefX[i];
            if (fitX.std_errors_available && fitX.std_errors[i] > 0.0) {
                row.tX = coefX[i] / fitX.std_errors[i];
                row.tX_valid = true;
            }
        }
        out.rows.push_back(std::move(row));
    }
    out.loglik0 = fit0.loglik;
    out.loglikX = fitX.loglik;
    out.aic0 = fit0.aic_norm;
    out.aicX = fitX.aic_norm;
    out.bic0 = fit0.bic_norm;
    out.bicX = fitX.bic_norm;
    return out;
}

} // namespace spreadnet
