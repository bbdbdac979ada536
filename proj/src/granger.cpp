#include "spreadnet/granger.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/distributions/fisher_f.hpp>

#include "spreadnet/errors.hpp"

namespace spreadnet {

OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    OlsFit out;
    out.beta = qr.solve(y);
    out.rss = (y - X * out.beta).squaredNorm();
    out.rank = qr.rank();
    return out;
}

GrangerResult granger_test(std::span<const double> y, std::span<const double> x, int lag_order) {
    if (lag_order < 1) throw DegenerateInput("granger_test: lag order must be >= 1");
    if (y.size() != x.size()) throw DegenerateInput("granger_test: length mismatch");
    const std::size_t d = std::size_t(lag_order);
    const std::size_t n = y.size();
    if (n <= d) throw DegenerateInput("granger_test: series shorter than lag order");

    const std::size_t rows = n - d;
    const std::size_t k_unres = 2 * d + 1;
    if (rows <= k_unres) {
        throw DegenerateInput("granger_test: insufficient data for lag order " +
                              std::to_string(lag_order));
    }

    Eigen::VectorXd yy(rows);
    Eigen::MatrixXd Xr(rows, d + 1);
    Eigen::MatrixXd Xu(rows, k_unres);
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + d;
        yy(r) = y[t];
        Xr(r, 0) = 1.0;
        Xu(r, 0) = 1.0;
        for (std::size_t k = 1; k <= d; ++k) {
            Xr(r, k) = y[t - k];
            Xu(r, k) = y[t - k];
            Xu(r, d + k) = x[t - k];
        }
    }

    const OlsFit restricted = ols_fit(Xr, yy);
    if (restricted.rank < long(d + 1)) {
        throw SingularDesign("granger_test: restricted design is rank-deficient");
    }
    const OlsFit unrestricted = ols_fit(Xu, yy);

    GrangerResult out;
    out.lag_order = lag_order;
    out.rss_restricted = restricted.rss;
    out.rss_unrestricted = unrestricted.rss;
    out.n_effective = rows;

    const double dof2 = double(rows - k_unres);
    const double num = std::max(0.0, restricted.rss - unrestricted.rss) / double(d);
    if (unrestricted.rss <= 0.0) {
        // exact fit: an identically-zero improvement still means F = 0
        out.f_stat = (num > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
        out.p_value = (num > 0.0) ? 0.0 : 1.0;
        return out;
    }
    out.f_stat = num / (unrestricted.rss / dof2);
    const boost::math::fisher_f_distribution<double> dist(double(d), dof2);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.f_stat));
    return out;
}

std::vector<SweepCell> causality_sweep(const std::vector<MaskedSeries>& targets,
                                       const std::vector<MaskedSeries>& covariates, int max_lag,
                                       double alpha) {
    std::vector<SweepCell> out;
    out.reserve(targets.size() * covariates.size() * std::size_t(max_lag));
    for (const auto& cov : covariates) {
        for (int lag = 1; lag <= max_lag; ++lag) {
            for (const auto& tgt : targets) {
                SweepCell cell;
                cell.covariate = cov.name;
                cell.target = tgt.name;
                cell.lag = lag;

                // Listwise deletion over the common axis, then lag on the
                // compacted sample.
                std::vector<double> xs, ys;
                const std::size_t n = std::min(cov.values.size(), tgt.values.size());
                for (std::size_t t = 0; t < n; ++t) {
                    const bool ok_x = cov.available.empty() || cov.available[t];
                    const bool ok_y = tgt.available.empty() || tgt.available[t];
                    if (ok_x && ok_y) {
                        xs.push_back(cov.values[t]);
                        ys.push_back(tgt.values[t]);
                    }
                }
                try {
                    cell.result = granger_test(ys, xs, lag);
                    cell.significant = cell.result->p_value < alpha;
                    cell.result->x_name = cov.name;
                    cell.result->y_name = tgt.name;
                } catch (const DegenerateInput&) {
                    cell.note = "insufficient data";
                } catch (const SingularDesign&) {
                    cell.note = "singular design";
                }
                out.push_back(std::move(cell));
            }
        }
    }
    return out;
}

} // namespace spreadnet
