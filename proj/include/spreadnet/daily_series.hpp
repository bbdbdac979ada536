#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "spreadnet/dates.hpp"

namespace spreadnet {

enum class CalendarKind { calendar, trading };

/// Date-indexed real-valued series. Invariants enforced at construction:
/// dates strictly increasing, one finite value per date.
class DailySeries {
public:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    DailySeries() = default;
    DailySeries(std::vector<Date> dates, std::vector<double> values,
                CalendarKind kind = CalendarKind::calendar);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<double>& values() const { return values_; }
    CalendarKind kind() const { return kind_; }
    std::size_t size() const { return dates_.size(); }
    bool empty() const { return dates_.empty(); }

    Date date_at(std::size_t i) const { return dates_[i]; }
    double value_at(std::size_t i) const { return values_[i]; }

    /// Exact-date lookup; npos when absent.
    std::size_t index_of(Date d) const;
    /// Index of the latest date <= d; npos when d precedes all dates.
    std::size_t index_at_or_before(Date d) const;

private:
    std::vector<Date> dates_;
    std::vector<double> values_;
    CalendarKind kind_ = CalendarKind::calendar;
};

enum class StandardizeKind { abnormal_price, rolling_z };

/// Output of a trailing-window standardization. Entries inside the warmup
/// window are flagged unavailable rather than zeroed; degenerate
/// (zero-variance) windows likewise mark their point unavailable.
struct StandardizedSeries {
    std::vector<Date> dates;
    std::vector<double> values;   // meaningful only where available
    std::vector<char> available;
    int window = 0;
    StandardizeKind kind = StandardizeKind::rolling_z;

    std::size_t size() const { return dates.size(); }
    std::size_t available_count() const;
};

/// AP_t = (P_t - mean(P_{t-window..t-1})) / stdev(P_{t-window..t-1}),
/// sample (n-1) standard deviation over the trailing window.
/// Throws WindowTooLong when the series is shorter than window+1 and
/// ZeroVariance when a trailing window is constant.
StandardizedSeries abnormal_price(const DailySeries& prices, int window = 148);

/// r_t = ln(P_t / P_{t-1}) and Vol_t = r_t^2; both start at the input's
/// second date. Throws NonPositivePrice.
std::pair<DailySeries, DailySeries> log_return_and_volatility(const DailySeries& prices);

/// z_t = (x_t - mean(x_{t-window..t-1})) / stdev(x_{t-window..t-1}).
/// Constant windows mark the point unavailable instead of propagating NaN.
StandardizedSeries rolling_zscore(const DailySeries& series, int window = 7);

/// Project a calendar-day covariate onto trading dates, carrying the most
/// recent prior calendar value forward over gaps. Throws NoPriorValue when a
/// trading date precedes every covariate date.
DailySeries align_to_trading_days(const DailySeries& covariate, const DailySeries& trading);

/// Masked variant: forward-fills from the most recent *available* point;
/// trading dates before the first available point come out unavailable.
StandardizedSeries align_to_trading_days(const StandardizedSeries& covariate,
                                         const DailySeries& trading);

// Shared helpers (two-pass trailing-window moments).
double mean_of(const double* x, std::size_t n);
double sample_stdev(const double* x, std::size_t n);

} // namespace spreadnet
