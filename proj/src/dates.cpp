#include "spreadnet/dates.hpp"

#include <charconv>
#include <cstdio>

#include "spreadnet/errors.hpp"

namespace spreadnet {

namespace {

bool parse_uint(std::string_view s, int& out) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return false;
    out = v;
    return true;
}

} // namespace

bool Date::try_parse(std::string_view iso, Date& out) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return false;
    int y = 0, m = 0, d = 0;
    if (!parse_uint(iso.substr(0, 4), y) || !parse_uint(iso.substr(5, 2), m) ||
        !parse_uint(iso.substr(8, 2), d)) {
        return false;
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{unsigned(m)},
                                          std::chrono::day{unsigned(d)}};
    if (!ymd.ok()) return false;
    out = Date{std::chrono::sys_days{ymd}};
    return true;
}

Date Date::parse(std::string_view iso) {
    Date d;
    if (!try_parse(iso, d)) {
        throw Error("invalid ISO-8601 date: '" + std::string(iso) + "'");
    }
    return d;
}

Date Date::from_ymd(int year, unsigned month, unsigned dom) {
    const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                          std::chrono::day{dom}};
    if (!ymd.ok()) throw Error("invalid calendar date");
    return Date{std::chrono::sys_days{ymd}};
}

std::string Date::iso() const {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                  unsigned(ymd.day()));
    return buf;
}

} // namespace spreadnet
