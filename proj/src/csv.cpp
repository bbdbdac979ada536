#include "spreadnet/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "spreadnet/errors.hpp"

namespace spreadnet {

std::vector<std::string> split_csv_line(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            break;
        }
        out.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

void for_each_csv_row(const std::string& path, const std::vector<std::string>& header,
                      const std::function<void(const std::vector<std::string>&, std::size_t)>& row) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw EmptyFile("empty file: " + path);
    const auto head = split_csv_line(line);
    if (head != header) {
        std::string want = join_csv(header);
        throw MalformedRow(path, 1, "expected header '" + want + "', got '" + join_csv(head) + "'");
    }

    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        row(split_csv_line(line), lineno);
    }
}

std::string join_csv(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

std::string fmt_g(double x, int significant) {
    if (std::isnan(x)) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", significant, x);
    return buf;
}

} // namespace spreadnet
