#pragma once

#include <map>
#include <string>
#include <vector>

#include "spreadnet/daily_series.hpp"
#include "spreadnet/dates.hpp"

namespace spreadnet {

/// One county-day observation of cumulative counts.
struct CountyDay {
    Date date;
    std::string fips; // zero-padded 5 digits
    long long cumulative_cases = 0;
    long long cumulative_deaths = 0;

    bool operator==(const CountyDay&) const = default;
};

struct CountyGeo {
    std::string fips;
    double latitude = 0.0;  // degrees, [-90, 90]
    double longitude = 0.0; // degrees, [-180, 180]
    std::string name;
    std::string state;
};

struct CountyCaseTable {
    /// Sorted by (fips, date); cumulative counts non-decreasing per fips.
    std::vector<CountyDay> records;
    std::size_t dropped_no_fips = 0; // e.g. NYT "Unknown" county rows
    std::size_t repaired_rows = 0;   // rows raised by the monotone repair
};

/// Parse `date,county,state,fips,cases,deaths`. Rows with an empty fips are
/// dropped and counted; cumulative decreases (source revisions) are repaired
/// by running maximum. Throws MalformedRow / EmptyFile.
CountyCaseTable read_county_cases(const std::string& path);

/// Running-maximum repair of cumulative counts, per fips. `records` must be
/// (fips, date)-sorted. Returns the number of rows raised.
std::size_t repair_monotone(std::vector<CountyDay>& records);

/// Daily new cases per fips: first differences of the cumulative count, the
/// first observed day contributing its full cumulative value. Inputs must be
/// monotone-repaired, so every output is >= 0.
std::map<std::string, DailySeries> new_cases(const std::vector<CountyDay>& records);
std::map<std::string, DailySeries> new_deaths(const std::vector<CountyDay>& records);

/// Parse `date,close`; rows sorted on load, duplicate dates rejected.
DailySeries read_price_csv(const std::string& path);

/// Parse `date,query,value`; one series per query, values passed through.
std::map<std::string, DailySeries> read_trends_csv(const std::string& path);

/// Parse `fips,name,state,lat,lon`; one row per fips, coordinates in range.
std::vector<CountyGeo> read_geo_csv(const std::string& path);

/// Parse `date,cases,deaths` (cumulative world counts), monotone-repaired
/// like county data. Optional input; see pipeline docs.
struct WorldCounts {
    DailySeries cumulative_cases;
    DailySeries cumulative_deaths;
};
WorldCounts read_world_csv(const std::string& path);

/// Serialize records in read_county_cases' schema (county/state left blank).
void write_county_cases(const std::string& path, const std::vector<CountyDay>& records);

} // namespace spreadnet
