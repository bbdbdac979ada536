#include "spreadnet/daily_series.hpp"

#include <algorithm>
#include <cmath>

#include "spreadnet/errors.hpp"

namespace spreadnet {

DailySeries::DailySeries(std::vector<Date> dates, std::vector<double> values, CalendarKind kind)
    : dates_(std::move(dates)), values_(std::move(values)), kind_(kind) {
    if (dates_.size() != values_.size()) {
        throw Error("DailySeries: dates/values length mismatch");
    }
    for (std::size_t i = 1; i < dates_.size(); ++i) {
        if (!(dates_[i - 1] < dates_[i])) {
            throw Error("DailySeries: dates not strictly increasing at " + dates_[i].iso());
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("DailySeries: non-finite value");
    }
}

std::size_t DailySeries::index_of(Date d) const {
    auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.end() || *it != d) return npos;
    return static_cast<std::size_t>(it - dates_.begin());
}

std::size_t DailySeries::index_at_or_before(Date d) const {
    auto it = std::upper_bound(dates_.begin(), dates_.end(), d);
    if (it == dates_.begin()) return npos;
    return static_cast<std::size_t>(it - dates_.begin()) - 1;
}

std::size_t StandardizedSeries::available_count() const {
    std::size_t n = 0;
    for (char a : available) n += (a != 0);
    return n;
}

double mean_of(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s / double(n);
}

double sample_stdev(const double* x, std::size_t n) {
    const double m = mean_of(x, n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - m;
        ss += d * d;
    }
    return std::sqrt(ss / double(n - 1));
}

namespace {

bool window_is_constant(const double* x, std::size_t n) {
    for (std::size_t i = 1; i < n; ++i) {
        if (x[i] != x[0]) return false;
    }
    return true;
}

} // namespace

StandardizedSeries abnormal_price(const DailySeries& prices, int window) {
    if (window < 2) throw Error("abnormal_price: window must be >= 2");
    const std::size_t n = prices.size();
    const std::size_t w = static_cast<std::size_t>(window);
    if (n < w + 1) {
        throw WindowTooLong("abnormal_price: series has " + std::to_string(n) +
                            " observations, need at least " + std::to_string(w + 1));
    }
    StandardizedSeries out;
    out.dates = prices.dates();
    out.values.assign(n, 0.0);
    out.available.assign(n, 0);
    out.window = window;
    out.kind = StandardizeKind::abnormal_price;

    const double* v = prices.values().data();
    for (std::size_t t = w; t < n; ++t) {
        const double* win = v + (t - w);
        if (window_is_constant(win, w)) {
            throw ZeroVariance("abnormal_price: constant trailing window ending " +
                               prices.date_at(t - 1).iso());
        }
        const double m = mean_of(win, w);
        const double sd = sample_stdev(win, w);
        out.values[t] = (v[t] - m) / sd;
        out.available[t] = 1;
    }
    return out;
}

std::pair<DailySeries, DailySeries> log_return_and_volatility(const DailySeries& prices) {
    const std::size_t n = prices.size();
    if (n < 2) throw Error("log_return_and_volatility: need at least 2 observations");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(prices.value_at(i) > 0.0)) {
            throw NonPositivePrice("non-positive price at " + prices.date_at(i).iso());
        }
    }
    std::vector<Date> dates(prices.dates().begin() + 1, prices.dates().end());
    std::vector<double> ret(n - 1), vol(n - 1);
    for (std::size_t t = 1; t < n; ++t) {
        const double r = std::log(prices.value_at(t) / prices.value_at(t - 1));
        ret[t - 1] = r;
        vol[t - 1] = r * r;
    }
    return {DailySeries(dates, std::move(ret), prices.kind()),
            DailySeries(std::move(dates), std::move(vol), prices.kind())};
}

StandardizedSeries rolling_zscore(const DailySeries& series, int window) {
    if (window < 2) throw Error("rolling_zscore: window must be >= 2");
    const std::size_t n = series.size();
    const std::size_t w = static_cast<std::size_t>(window);

    StandardizedSeries out;
    out.dates = series.dates();
    out.values.assign(n, 0.0);
    out.available.assign(n, 0);
    out.window = window;
    out.kind = StandardizeKind::rolling_z;

    const double* v = series.values().data();
    for (std::size_t t = w; t < n; ++t) {
        const double* win = v + (t - w);
        if (window_is_constant(win, w)) continue; // 0/0: left unavailable
        const double m = mean_of(win, w);
        const double sd = sample_stdev(win, w);
        out.values[t] = (v[t] - m) / sd;
        out.available[t] = 1;
    }
    return out;
}

DailySeries align_to_trading_days(const DailySeries& covariate, const DailySeries& trading) {
    std::vector<double> values;
    values.reserve(trading.size());
    for (Date d : trading.dates()) {
        const std::size_t i = covariate.index_at_or_before(d);
        if (i == DailySeries::npos) {
            throw NoPriorValue("no covariate value at or before " + d.iso());
        }
        values.push_back(covariate.value_at(i));
    }
    return DailySeries(trading.dates(), std::move(values), CalendarKind::trading);
}

StandardizedSeries align_to_trading_days(const StandardizedSeries& covariate,
                                         const DailySeries& trading) {
    StandardizedSeries out;
    out.dates = trading.dates();
    out.values.assign(trading.size(), 0.0);
    out.available.assign(trading.size(), 0);
    out.window = covariate.window;
    out.kind = covariate.kind;

    // Walk both date axes once; remember the last available covariate point.
    std::size_t j = 0;
    double last_value = 0.0;
    bool have_value = false;
    for (std::size_t i = 0; i < trading.size(); ++i) {
        const Date d = trading.date_at(i);
        while (j < covariate.size() && covariate.dates[j] <= d) {
            if (covariate.available[j]) {
                last_value = covariate.values[j];
                have_value = true;
            }
            ++j;
        }
        if (have_value) {
            out.values[i] = last_value;
            out.available[i] = 1;
        }
    }
    return out;
}

} // namespace spreadnet
