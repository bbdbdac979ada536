#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace spreadnet {

/// Split one comma-delimited line. `\r` stripped; no quoting (none of the
/// supported schemas carries embedded commas).
std::vector<std::string> split_csv_line(std::string_view line);

/// Stream a CSV file: validates the exact header, then calls `row` with the
/// split fields and the 1-based line number of each non-empty data line.
/// Throws MalformedRow on a header mismatch or unreadable file.
void for_each_csv_row(const std::string& path, const std::vector<std::string>& header,
                      const std::function<void(const std::vector<std::string>&, std::size_t)>& row);

/// Join fields with commas; fields must not contain ',' or newlines.
std::string join_csv(const std::vector<std::string>& fields);

/// Deterministic numeric formatting for emitted tables ("%.*g").
std::string fmt_g(double x, int significant = 10);

} // namespace spreadnet
