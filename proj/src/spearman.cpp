#include "spreadnet/spearman.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "spreadnet/errors.hpp"

namespace spreadnet {

std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double shared = 0.5 * double(i + j) + 1.0; // mean of 1-based ranks i+1..j+1
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DegenerateInput("spearman: length mismatch");
    const std::size_t n = x.size();
    if (n < 3) throw DegenerateInput("spearman: need at least 3 paired observations");

    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double mean = 0.5 * double(n + 1);

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("spearman: constant input vector");

    double rho = sxy / std::sqrt(sxx * syy);
    rho = std::clamp(rho, -1.0, 1.0);

    SpearmanResult out;
    out.rho = rho;
    out.n = n;
    if (std::abs(rho) >= 1.0) {
        out.p_value = 0.0;
        return out;
    }
    const double dof = double(n - 2);
    const double t = rho * std::sqrt(dof / (1.0 - rho * rho));
    const boost::math::students_t_distribution<double> dist(dof);
    out.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
    return out;
}

std::vector<LagCorrelation> lagged_correlations(std::span<const double> x,
                                                std::span<const char> x_available,
                                                std::span<const double> y,
                                                std::span<const char> y_available, int max_lag) {
    if (x.size() != y.size()) throw DegenerateInput("lagged_correlations: length mismatch");
    const std::size_t n = x.size();

    std::vector<LagCorrelation> out;
    out.reserve(std::size_t(max_lag) + 1);
    for (int lag = 0; lag <= max_lag; ++lag) {
        LagCorrelation row;
        row.lag = lag;
        std::vector<double> xs, ys;
        for (std::size_t t = std::size_t(lag); t < n; ++t) {
            const std::size_t s = t - std::size_t(lag);
            const bool ok_x = x_available.empty() || x_available[s];
            const bool ok_y = y_available.empty() || y_available[t];
            if (ok_x && ok_y) {
                xs.push_back(x[s]);
                ys.push_back(y[t]);
            }
        }
        try {
            const SpearmanResult r = spearman(xs, ys);
            row.rho = r.rho;
            row.p_value = r.p_value;
            row.n = r.n;
            row.defined = true;
        } catch (const DegenerateInput&) {
            row.n = xs.size();
            row.defined = false;
        }
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace spreadnet
