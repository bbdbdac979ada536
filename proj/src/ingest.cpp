#include "spreadnet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "spreadnet/csv.hpp"
#include "spreadnet/errors.hpp"

namespace spreadnet {

namespace {

long long parse_count(const std::string& s, const std::string& path, std::size_t line) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || v < 0) {
        throw MalformedRow(path, line, "bad count '" + s + "'");
    }
    return v;
}

double parse_real(const std::string& s, const std::string& path, std::size_t line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw MalformedRow(path, line, "bad number '" + s + "'");
    }
}

Date parse_date_field(const std::string& s, const std::string& path, std::size_t line) {
    Date d;
    if (!Date::try_parse(s, d)) throw MalformedRow(path, line, "bad date '" + s + "'");
    return d;
}

/// Zero-pad numeric fips to 5 digits; empty stays empty (caller drops it).
std::string normalize_fips(const std::string& raw, const std::string& path, std::size_t line) {
    if (raw.empty()) return {};
    if (raw.size() > 5 || raw.find_first_not_of("0123456789") != std::string::npos) {
        throw MalformedRow(path, line, "bad fips '" + raw + "'");
    }
    std::string fips(5 - raw.size(), '0');
    return fips + raw;
}

} // namespace

CountyCaseTable read_county_cases(const std::string& path) {
    CountyCaseTable table;
    for_each_csv_row(path, {"date", "county", "state", "fips", "cases", "deaths"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 6) throw MalformedRow(path, line, "expected 6 fields");
                         const std::string fips = normalize_fips(f[3], path, line);
                         if (fips.empty()) {
                             ++table.dropped_no_fips;
                             return;
                         }
                         CountyDay rec;
                         rec.date = parse_date_field(f[0], path, line);
                         rec.fips = fips;
                         rec.cumulative_cases = parse_count(f[4], path, line);
                         rec.cumulative_deaths = parse_count(f[5], path, line);
                         table.records.push_back(std::move(rec));
                     });
    if (table.records.empty()) throw EmptyFile("no usable rows in " + path);

    std::sort(table.records.begin(), table.records.end(), [](const CountyDay& a, const CountyDay& b) {
        return a.fips != b.fips ? a.fips < b.fips : a.date < b.date;
    });
    for (std::size_t i = 1; i < table.records.size(); ++i) {
        const auto& prev = table.records[i - 1];
        const auto& cur = table.records[i];
        if (prev.fips == cur.fips && prev.date == cur.date) {
            throw MalformedRow(path, 0, "duplicate (fips,date) " + cur.fips + " " + cur.date.iso());
        }
    }
    table.repaired_rows = repair_monotone(table.records);
    return table;
}

std::size_t repair_monotone(std::vector<CountyDay>& records) {
    std::size_t repaired = 0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].fips != records[i - 1].fips) continue;
        bool raised = false;
        if (records[i].cumulative_cases < records[i - 1].cumulative_cases) {
            records[i].cumulative_cases = records[i - 1].cumulative_cases;
            raised = true;
        }
        if (records[i].cumulative_deaths < records[i - 1].cumulative_deaths) {
            records[i].cumulative_deaths = records[i - 1].cumulative_deaths;
            raised = true;
        }
        repaired += raised;
    }
    return repaired;
}

namespace {

std::map<std::string, DailySeries> first_differences(const std::vector<CountyDay>& records,
                                                     long long CountyDay::*field) {
    std::map<std::string, DailySeries> out;
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        while (j < records.size() && records[j].fips == records[i].fips) ++j;
        std::vector<Date> dates;
        std::vector<double> values;
        dates.reserve(j - i);
        values.reserve(j - i);
        for (std::size_t k = i; k < j; ++k) {
            const long long prev = (k == i) ? 0 : records[k - 1].*field;
            dates.push_back(records[k].date);
            values.push_back(double(records[k].*field - prev));
        }
        out.emplace(records[i].fips, DailySeries(std::move(dates), std::move(values)));
        i = j;
    }
    return out;
}

} // namespace

std::map<std::string, DailySeries> new_cases(const std::vector<CountyDay>& records) {
    return first_differences(records, &CountyDay::cumulative_cases);
}

std::map<std::string, DailySeries> new_deaths(const std::vector<CountyDay>& records) {
    return first_differences(records, &CountyDay::cumulative_deaths);
}

DailySeries read_price_csv(const std::string& path) {
    std::vector<std::pair<Date, double>> rows;
    for_each_csv_row(path, {"date", "close"}, [&](const std::vector<std::string>& f, std::size_t line) {
        if (f.size() != 2) throw MalformedRow(path, line, "expected 2 fields");
        rows.emplace_back(parse_date_field(f[0], path, line), parse_real(f[1], path, line));
    });
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Date> dates;
    std::vector<double> values;
    for (const auto& [d, v] : rows) {
        if (!dates.empty() && dates.back() == d) {
            throw DuplicateDate(path + ": duplicate date " + d.iso());
        }
        dates.push_back(d);
        values.push_back(v);
    }
    return DailySeries(std::move(dates), std::move(values), CalendarKind::trading);
}

std::map<std::string, DailySeries> read_trends_csv(const std::string& path) {
    std::map<std::string, std::vector<std::pair<Date, double>>> rows;
    for_each_csv_row(path, {"date", "query", "value"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 3) throw MalformedRow(path, line, "expected 3 fields");
                         if (f[1].empty()) throw MalformedRow(path, line, "empty query");
                         rows[f[1]].emplace_back(parse_date_field(f[0], path, line),
                                                 parse_real(f[2], path, line));
                     });
    std::map<std::string, DailySeries> out;
    for (auto& [query, pairs] : rows) {
        std::sort(pairs.begin(), pairs.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<Date> dates;
        std::vector<double> values;
        for (const auto& [d, v] : pairs) {
            if (!dates.empty() && dates.back() == d) {
                throw DuplicateDate(path + ": duplicate date " + d.iso() + " for query '" +
                                    query + "'");
            }
            dates.push_back(d);
            values.push_back(v);
        }
        out.emplace(query, DailySeries(std::move(dates), std::move(values)));
    }
    return out;
}

std::vector<CountyGeo> read_geo_csv(const std::string& path) {
    std::vector<CountyGeo> out;
    std::set<std::string> seen;
    for_each_csv_row(path, {"fips", "name", "state", "lat", "lon"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 5) throw MalformedRow(path, line, "expected 5 fields");
                         CountyGeo g;
                         g.fips = normalize_fips(f[0], path, line);
                         if (g.fips.empty()) throw MalformedRow(path, line, "empty fips");
                         g.name = f[1];
                         g.state = f[2];
                         g.latitude = parse_real(f[3], path, line);
                         g.longitude = parse_real(f[4], path, line);
                         if (g.latitude < -90.0 || g.latitude > 90.0 || g.longitude < -180.0 ||
                             g.longitude > 180.0) {
                             throw MalformedRow(path, line, "coordinates out of range");
                         }
                         if (!seen.insert(g.fips).second) {
                             throw DuplicateFips(path + ": duplicate fips " + g.fips);
                         }
                         out.push_back(std::move(g));
                     });
    std::sort(out.begin(), out.end(),
              [](const CountyGeo& a, const CountyGeo& b) { return a.fips < b.fips; });
    return out;
}

WorldCounts read_world_csv(const std::string& path) {
    std::vector<std::tuple<Date, long long, long long>> rows;
    for_each_csv_row(path, {"date", "cases", "deaths"},
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 3) throw MalformedRow(path, line, "expected 3 fields");
                         rows.emplace_back(parse_date_field(f[0], path, line),
                                           parse_count(f[1], path, line),
                                           parse_count(f[2], path, line));
                     });
    std::sort(rows.begin(), rows.end());
    std::vector<Date> dates;
    std::vector<double> cases, deaths;
    long long max_c = 0, max_d = 0;
    for (const auto& [d, c, dd] : rows) {
        if (!dates.empty() && dates.back() == d) {
            throw DuplicateDate(path + ": duplicate date " + d.iso());
        }
        max_c = std::max(max_c, c);
        max_d = std::max(max_d, dd);
        dates.push_back(d);
        cases.push_back(double(max_c));
        deaths.push_back(double(max_d));
    }
    return {DailySeries(dates, std::move(cases)), DailySeries(dates, std::move(deaths))};
}

void write_county_cases(const std::string& path, const std::vector<CountyDay>& records) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << "date,county,state,fips,cases,deaths\n";
    for (const auto& r : records) {
        out << r.date.iso() << ",,," << r.fips << ',' << r.cumulative_cases << ','
            << r.cumulative_deaths << '\n';
    }
}

} // namespace spreadnet
