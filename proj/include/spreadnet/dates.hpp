#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace spreadnet {

/// Calendar day, ISO-8601 in and out. Thin value wrapper over sys_days so
/// day arithmetic and comparisons stay trivial.
struct Date {
    std::chrono::sys_days day{};

    /// Strict `YYYY-MM-DD` parse; throws spreadnet::Error on anything else.
    static Date parse(std::string_view iso);
    static bool try_parse(std::string_view iso, Date& out);
    static Date from_ymd(int year, unsigned month, unsigned dom);

    std::string iso() const;

    Date plus_days(int n) const { return Date{day + std::chrono::days{n}}; }

    friend int operator-(Date a, Date b) {
        return static_cast<int>((a.day - b.day).count());
    }
    auto operator<=>(const Date&) const = default;
};

} // namespace spreadnet
