#include "spreadnet/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "spreadnet/csv.hpp"
#include "spreadnet/daily_series.hpp"
#include "spreadnet/egarch.hpp"
#include "spreadnet/errors.hpp"
#include "spreadnet/ingest.hpp"
#include "spreadnet/motifs.hpp"
#include "spreadnet/network.hpp"
#include "spreadnet/parallel.hpp"
#include "spreadnet/spearman.hpp"

namespace fs = std::filesystem;

namespace spreadnet {

namespace {

// ---------------------------------------------------------------------- config

long long to_ll(const std::string& key, const std::string& v) {
    long long out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) {
        throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': bad number '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("config key '" + key + "': bad boolean '" + v + "'");
}

Date to_date(const std::string& key, const std::string& v) {
    Date d;
    if (!Date::try_parse(v, d)) throw ConfigError("config key '" + key + "': bad date '" + v + "'");
    return d;
}

std::vector<int> to_int_list(const std::string& key, const std::string& v) {
    std::vector<int> out;
    std::size_t start = 0;
    while (start <= v.size()) {
        const std::size_t comma = v.find(',', start);
        const std::string item =
            v.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!item.empty()) out.push_back(int(to_ll(key, item)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

std::string trimmed(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

} // namespace

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        out[trimmed(t.substr(0, eq))] = trimmed(t.substr(eq + 1));
    }
    return out;
}

void apply_config_entry(RunConfig& c, const std::string& key, const std::string& value) {
    if (key == "cases") c.cases_path = value;
    else if (key == "geo") c.geo_path = value;
    else if (key == "prices") c.prices_path = value;
    else if (key == "trends") c.trends_path = value;
    else if (key == "world") c.world_path = value;
    else if (key == "gamma") c.gamma = to_ll(key, value);
    else if (key == "lambda") c.lambda = to_ll(key, value);
    else if (key == "delta") c.delta = to_double(key, value);
    else if (key == "z_window") c.z_window = int(to_ll(key, value));
    else if (key == "ap_window") c.ap_window = int(to_ll(key, value));
    else if (key == "max_lag") c.max_lag = int(to_ll(key, value));
    else if (key == "horizons") c.horizons = to_int_list(key, value);
    else if (key == "n_trees") c.n_trees = int(to_ll(key, value));
    else if (key == "mtry") c.mtry = int(to_ll(key, value));
    else if (key == "min_leaf") c.min_leaf = int(to_ll(key, value));
    else if (key == "seed") c.seed = std::uint64_t(to_ll(key, value));
    else if (key == "split_date") c.split_date = to_date(key, value);
    else if (key == "direct_horizons") c.direct_horizons = to_bool(key, value);
    else if (key == "start") c.start = to_date(key, value);
    else if (key == "end") c.end = to_date(key, value);
    else if (key == "out") c.output_dir = value;
    else if (key == "jobs") c.jobs = int(to_ll(key, value));
    else if (key == "alpha_causality") c.alpha_causality = to_double(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void validate_config(const RunConfig& c) {
    if (c.gamma < 1 || c.lambda < 1) throw ConfigError("gamma and lambda must be >= 1");
    if (!(c.delta > 0.0)) throw ConfigError("delta must be > 0");
    if (c.z_window < 2) throw ConfigError("z_window must be >= 2");
    if (c.ap_window < 2) throw ConfigError("ap_window must be >= 2");
    if (c.max_lag < 1) throw ConfigError("max_lag must be >= 1");
    if (c.horizons.empty()) throw ConfigError("horizons must be non-empty");
    for (int h : c.horizons) {
        if (h < 1) throw ConfigError("horizons must be >= 1");
    }
    if (c.n_trees < 1) throw ConfigError("n_trees must be >= 1");
    if (c.min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
    if (!c.seed.has_value()) throw ConfigError("seed is required");
    if (c.output_dir.empty()) throw ConfigError("output directory is required");
    if (c.end < c.start) throw ConfigError("end date precedes start date");
    if (c.jobs < 1) throw ConfigError("jobs must be >= 1");
    if (c.cases_path.empty() || c.geo_path.empty() || c.prices_path.empty() ||
        c.trends_path.empty()) {
        throw ConfigError("cases, geo, prices and trends paths are all required");
    }
}

// ------------------------------------------------------------------- plumbing

namespace {

std::string out_path(const RunConfig& c, const std::string& name) {
    return (fs::path(c.output_dir) / name).string();
}

void ensure_output_dir(const RunConfig& c) {
    std::error_code ec;
    fs::create_directories(fs::path(c.output_dir) / "graphs", ec);
    if (ec) throw ConfigError("cannot create output directory: " + c.output_dir);
}

void require_upstream(const std::string& path) {
    if (!fs::exists(path)) throw MissingUpstream("missing upstream artifact: " + path);
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // '\n' line endings everywhere
    if (!out) throw Error("cannot write " + path);
    return out;
}

std::string graph_nodes_name(Date d) { return "graphs/" + d.iso() + "_nodes.csv"; }
std::string graph_edges_name(Date d) { return "graphs/" + d.iso() + "_edges.csv"; }

// ------------------------------------------------------ derived input series

struct NationalSeries {
    DailySeries total_cases, new_cases_s, total_deaths, new_deaths_s;
};

/// Daily US aggregates from county records, densified over the records' full
/// date span (days without reports contribute zero new counts).
NationalSeries national_series(const std::vector<CountyDay>& records) {
    if (records.empty()) throw EmptyFile("no county records");
    std::map<Date, std::pair<long long, long long>> events; // date -> (new cases, new deaths)
    const auto per_fips_cases = new_cases(records);
    const auto per_fips_deaths = new_deaths(records);
    for (const auto& [fips, series] : per_fips_cases) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            events[series.date_at(i)].first += (long long)series.value_at(i);
        }
    }
    for (const auto& [fips, series] : per_fips_deaths) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            events[series.date_at(i)].second += (long long)series.value_at(i);
        }
    }
    const Date first = events.begin()->first;
    const Date last = events.rbegin()->first;
    std::vector<Date> dates;
    std::vector<double> tc, nc, td, nd;
    long long cum_c = 0, cum_d = 0;
    for (Date d = first; d <= last; d = d.plus_days(1)) {
        const auto it = events.find(d);
        const long long ec = it == events.end() ? 0 : it->second.first;
        const long long ed = it == events.end() ? 0 : it->second.second;
        cum_c += ec;
        cum_d += ed;
        dates.push_back(d);
        nc.push_back(double(ec));
        tc.push_back(double(cum_c));
        nd.push_back(double(ed));
        td.push_back(double(cum_d));
    }
    return {DailySeries(dates, std::move(tc)), DailySeries(dates, std::move(nc)),
            DailySeries(dates, std::move(td)), DailySeries(dates, std::move(nd))};
}

DailySeries diff_with_initial(const DailySeries& cumulative) {
    std::vector<double> values(cumulative.size());
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        values[i] = cumulative.value_at(i) - (i ? cumulative.value_at(i - 1) : 0.0);
    }
    return DailySeries(cumulative.dates(), std::move(values), cumulative.kind());
}

/// Slice a daily series to [start, end].
DailySeries clip(const DailySeries& s, Date start, Date end) {
    std::vector<Date> dates;
    std::vector<double> values;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.date_at(i) < start || end < s.date_at(i)) continue;
        dates.push_back(s.date_at(i));
        values.push_back(s.value_at(i));
    }
    return DailySeries(std::move(dates), std::move(values), s.kind());
}

StandardizedSeries as_masked(const DailySeries& s) {
    StandardizedSeries out;
    out.dates = s.dates();
    out.values = s.values();
    out.available.assign(s.size(), 1);
    return out;
}

BundleColumn column_from(const StandardizedSeries& s) {
    return {s.values, s.available};
}

/// Values of `s` looked up on the axis dates; absent dates are unavailable.
BundleColumn column_on_axis(const DailySeries& s, const std::vector<Date>& axis) {
    BundleColumn col;
    col.values.assign(axis.size(), 0.0);
    col.available.assign(axis.size(), 0);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const std::size_t j = s.index_of(axis[i]);
        if (j != DailySeries::npos) {
            col.values[i] = s.value_at(j);
            col.available[i] = 1;
        }
    }
    return col;
}

struct MotifTable {
    std::vector<Date> dates;
    std::map<std::string, std::vector<double>> columns; // V,E,GC,T1,T2,M1..M6,TotM
};

MotifTable read_motif_table(const std::string& path) {
    MotifTable t;
    const std::vector<std::string> names = {"V",  "E",  "GC", "T1", "T2", "M1",
                                            "M2", "M3", "M4", "M5", "M6", "TotM"};
    for (auto& n : names) t.columns[n] = {};
    for_each_csv_row(path, split_csv_line(kMotifsHeader),
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 13) throw MalformedRow(path, line, "expected 13 fields");
                         t.dates.push_back(Date::parse(f[0]));
                         for (std::size_t k = 0; k < names.size(); ++k) {
                             t.columns[names[k]].push_back(std::stod(f[k + 1]));
                         }
                     });
    return t;
}

} // namespace

std::string canonical_query_name(const std::string& query) {
    std::string out;
    out.reserve(query.size());
    for (char ch : trimmed(query)) {
        out += (ch == ' ') ? '_' : char(std::tolower((unsigned char)ch));
    }
    return out;
}

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file for checksum: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            hash ^= std::uint64_t((unsigned char)buf[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", (unsigned long long)hash);
    return hex;
}

// --------------------------------------------------------------------- stages

std::size_t stage_network(const RunConfig& c) {
    ensure_output_dir(c);
    const CountyCaseTable cases = read_county_cases(c.cases_path);
    const std::vector<CountyGeo> geo = read_geo_csv(c.geo_path);
    const auto per_fips = new_cases(cases.records);

    // bucket per-day positive new-case counts
    std::map<Date, std::map<std::string, long long>> by_day;
    for (const auto& [fips, series] : per_fips) {
        for (std::size_t i = 0; i < series.size(); ++i) {
            const long long v = (long long)series.value_at(i);
            if (v > 0 && !(series.date_at(i) < c.start) && !(c.end < series.date_at(i))) {
                by_day[series.date_at(i)][fips] = v;
            }
        }
    }

    std::vector<Date> days;
    for (Date d = c.start; d <= c.end; d = d.plus_days(1)) days.push_back(d);

    static const std::map<std::string, long long> kNoCases;
    std::vector<SpreadGraph> graphs(days.size());
    parallel_for(days.size(), c.jobs, [&](std::size_t i) {
        const auto it = by_day.find(days[i]);
        graphs[i] = build_spread_graph(days[i], it == by_day.end() ? kNoCases : it->second, geo,
                                       c.gamma, c.lambda, c.delta);
    });

    auto features = open_output(out_path(c, "network_features.csv"));
    features << kNetworkFeaturesHeader << '\n';
    for (const auto& g : graphs) {
        const NetworkFeatures f = network_features(g);
        features << f.date.iso() << ',' << f.V << ',' << f.E << ',' << f.GC << '\n';
        write_graph_files(g, out_path(c, graph_nodes_name(g.date)),
                          out_path(c, graph_edges_name(g.date)));
    }
    return graphs.size();
}

std::size_t stage_motifs(const RunConfig& c) {
    ensure_output_dir(c);
    const std::string features_path = out_path(c, "network_features.csv");
    require_upstream(features_path);

    std::vector<Date> days;
    for_each_csv_row(features_path, split_csv_line(kNetworkFeaturesHeader),
                     [&](const std::vector<std::string>& f, std::size_t line) {
                         if (f.size() != 4) throw MalformedRow(features_path, line, "expected 4 fields");
                         days.push_back(Date::parse(f[0]));
                     });

    std::vector<SpreadGraph> graphs(days.size());
    for (std::size_t i = 0; i < days.size(); ++i) {
        const std::string nodes = out_path(c, graph_nodes_name(days[i]));
        const std::string edges = out_path(c, graph_edges_name(days[i]));
        require_upstream(nodes);
        require_upstream(edges);
        graphs[i] = read_graph_files(days[i], nodes, edges);
    }

    const auto rows = census_series(graphs, CensusBackend::fast, c.jobs);

    auto out = open_output(out_path(c, "motifs.csv"));
    out << kMotifsHeader << '\n';
    for (const auto& r : rows) {
        out << r.date.iso() << ',' << r.V << ',' << r.E << ',' << r.GC << ',' << r.T1 << ','
            << r.T2;
        for (long long m : r.M) out << ',' << m;
        out << ',' << r.TotM << '\n';
    }
    return rows.size();
}

SeriesBundle build_bundle(const RunConfig& c) {
    const std::string motifs_path = out_path(c, "motifs.csv");
    require_upstream(motifs_path);

    const DailySeries prices = read_price_csv(c.prices_path);
    const StandardizedSeries ap_full = abnormal_price(prices, c.ap_window);

    SeriesBundle bundle;
    // trading axis: price dates inside the analysis window
    const DailySeries axis_prices = clip(prices, c.start, c.end);
    if (axis_prices.size() < 2) throw Error("fewer than 2 trading days in analysis window");
    bundle.dates = axis_prices.dates();

    // AP restricted to the axis (same underlying date vector as prices)
    {
        BundleColumn ap;
        ap.values.reserve(bundle.dates.size());
        ap.available.reserve(bundle.dates.size());
        for (Date d : bundle.dates) {
            const std::size_t i = prices.index_of(d);
            ap.values.push_back(ap_full.values[i]);
            ap.available.push_back(ap_full.available[i]);
        }
        bundle.columns.emplace("AP", std::move(ap));
    }
    // Vol on the axis
    {
        const auto [ret, vol] = log_return_and_volatility(prices);
        bundle.columns.emplace("Vol", column_on_axis(clip(vol, c.start, c.end), bundle.dates));
    }

    const auto standardized_column = [&](const DailySeries& native) {
        const StandardizedSeries z = rolling_zscore(native, c.z_window);
        return column_from(align_to_trading_days(z, axis_prices));
    };

    // Covid covariates (US aggregates from county data; world optional)
    const CountyCaseTable cases = read_county_cases(c.cases_path);
    const NationalSeries us = national_series(cases.records);
    bundle.columns.emplace("us_total_cases", standardized_column(us.total_cases));
    bundle.columns.emplace("us_new_cases", standardized_column(us.new_cases_s));
    bundle.columns.emplace("us_total_deaths", standardized_column(us.total_deaths));
    bundle.columns.emplace("us_new_deaths", standardized_column(us.new_deaths_s));
    if (!c.world_path.empty()) {
        const WorldCounts world = read_world_csv(c.world_path);
        bundle.columns.emplace("world_total_cases", standardized_column(world.cumulative_cases));
        bundle.columns.emplace("world_new_cases",
                               standardized_column(diff_with_initial(world.cumulative_cases)));
        bundle.columns.emplace("world_total_deaths", standardized_column(world.cumulative_deaths));
        bundle.columns.emplace("world_new_deaths",
                               standardized_column(diff_with_initial(world.cumulative_deaths)));
    }

    // Spread-network covariates
    const MotifTable motifs = read_motif_table(motifs_path);
    for (const auto& [name, values] : motifs.columns) {
        bundle.columns.emplace(name, standardized_column(DailySeries(motifs.dates, values)));
    }

    // Search-trend covariates
    for (const auto& [query, series] : read_trends_csv(c.trends_path)) {
        const std::string name = canonical_query_name(query);
        if (bundle.columns.count(name)) {
            throw Error("trend query '" + query + "' collides with column '" + name + "'");
        }
        bundle.columns.emplace(name, standardized_column(series));
    }
    return bundle;
}

std::vector<std::string> covid_variable_names(const SeriesBundle& bundle) {
    std::vector<std::string> names = {"us_total_cases", "us_new_cases", "us_total_deaths",
                                      "us_new_deaths"};
    for (const char* w : {"world_total_cases", "world_new_cases", "world_total_deaths",
                          "world_new_deaths"}) {
        if (bundle.columns.count(w)) names.push_back(w);
    }
    return names;
}

std::vector<std::string> spread_variable_names() {
    return {"V", "E", "GC", "T1", "T2", "M1", "M2", "M3", "M4", "M5", "M6", "TotM"};
}

std::vector<std::string> trend_variable_names(const SeriesBundle& bundle) {
    std::set<std::string> known;
    for (const auto& n : covid_variable_names(bundle)) known.insert(n);
    for (const auto& n : spread_variable_names()) known.insert(n);
    known.insert("AP");
    known.insert("Vol");
    std::vector<std::string> out;
    for (const auto& [name, col] : bundle.columns) {
        if (!known.count(name)) out.push_back(name);
    }
    return out;
}

namespace {

std::size_t write_correlation_table(const RunConfig& c, const SeriesBundle& bundle,
                                    const std::vector<std::string>& variables,
                                    const std::string& file) {
    const BundleColumn& ap = bundle.columns.at("AP");
    auto out = open_output(out_path(c, file));
    out << kCorrelationHeader << '\n';
    for (const auto& name : variables) {
        const BundleColumn& x = bundle.columns.at(name);
        const auto rows =
            lagged_correlations(x.values, x.available, ap.values, ap.available, c.max_lag - 1);
        for (const auto& r : rows) {
            out << name << ',' << r.lag << ',';
            if (r.defined) {
                out << fmt_g(r.rho, 6) << ',' << fmt_g(r.p_value, 6);
            } else {
                out << ',';
            }
            out << '\n';
        }
    }
    return variables.size() * std::size_t(c.max_lag);
}

void write_causality_table(const RunConfig& c, const std::vector<SweepCell>& cells,
                           const std::string& file) {
    auto out = open_output(out_path(c, file));
    out << kCausalityHeader << '\n';
    for (const auto& cell : cells) {
        out << cell.covariate << ',' << cell.lag << ',' << cell.target << ',';
        if (cell.result.has_value()) {
            out << fmt_g(cell.result->f_stat, 6) << ',' << fmt_g(cell.result->p_value, 6) << ','
                << (cell.significant ? '1' : '0');
        } else {
            out << ",," << cell.note;
        }
        out << '\n';
    }
}

std::vector<MaskedSeries> masked_from(const SeriesBundle& bundle,
                                      const std::vector<std::string>& names) {
    std::vector<MaskedSeries> out;
    out.reserve(names.size());
    for (const auto& n : names) {
        const BundleColumn& col = bundle.columns.at(n);
        out.push_back({n, col.values, col.available});
    }
    return out;
}

} // namespace

std::size_t stage_correlate(const RunConfig& c) {
    ensure_output_dir(c);
    const SeriesBundle bundle = build_bundle(c);
    std::size_t rows = 0;
    rows += write_correlation_table(c, bundle, covid_variable_names(bundle), "corr_covid.csv");
    rows += write_correlation_table(c, bundle, spread_variable_names(), "corr_spread.csv");
    rows += write_correlation_table(c, bundle, trend_variable_names(bundle), "corr_trends.csv");
    return rows;
}

std::size_t stage_granger(const RunConfig& c) {
    ensure_output_dir(c);
    const SeriesBundle bundle = build_bundle(c);
    const std::vector<MaskedSeries> targets = {
        {"P", bundle.columns.at("AP").values, bundle.columns.at("AP").available},
        {"Vol", bundle.columns.at("Vol").values, bundle.columns.at("Vol").available},
    };
    std::size_t rows = 0;
    const auto run_family = [&](const std::vector<std::string>& names, const std::string& file) {
        const auto cells =
            causality_sweep(targets, masked_from(bundle, names), c.max_lag, c.alpha_causality);
        write_causality_table(c, cells, file);
        rows += cells.size();
    };
    run_family(covid_variable_names(bundle), "granger_covid.csv");
    run_family(spread_variable_names(), "granger_spread.csv");
    run_family(trend_variable_names(bundle), "granger_trends.csv");
    return rows;
}

std::size_t stage_forecast(const RunConfig& c, const std::vector<ModelSpec>& models) {
    ensure_output_dir(c);
    const SeriesBundle bundle = build_bundle(c);

    std::vector<ModelSpec> menu = models;
    if (menu.empty()) {
        menu = {ModelSpec::P0, ModelSpec::P1, ModelSpec::P2, ModelSpec::P3, ModelSpec::P4};
    }
    ForestConfig rf;
    rf.n_trees = c.n_trees;
    rf.mtry = c.mtry;
    rf.min_leaf = c.min_leaf;
    rf.seed = c.seed.value();

    const EvaluateResult result =
        evaluate(menu, bundle, c.horizons, c.split_date, rf, c.jobs, c.direct_horizons);

    auto delta = open_output(out_path(c, "forecast_delta.csv"));
    delta << kDeltaHeader << '\n';
    for (const auto& row : result.table) {
        delta << to_string(row.model) << ',' << row.horizon << ',' << fmt_g(row.rmse, 6) << ','
              << fmt_g(row.delta, 6) << '\n';
    }

    for (int h : c.horizons) {
        auto preds = open_output(out_path(c, "predictions_h" + std::to_string(h) + ".csv"));
        preds << kPredictionsHeader << '\n';
        for (const auto& p : result.predictions) {
            if (p.horizon != h) continue;
            preds << p.date.iso() << ',' << fmt_g(p.observed) << ',' << fmt_g(p.predicted) << ','
                  << to_string(p.model) << '\n';
        }
    }
    return result.table.size();
}

std::size_t stage_egarch(const RunConfig& c) {
    ensure_output_dir(c);
    const std::string motifs_path = out_path(c, "motifs.csv");
    require_upstream(motifs_path);

    const DailySeries prices = read_price_csv(c.prices_path);
    const DailySeries axis_prices = clip(prices, c.start, c.end);
    const auto [ret_full, vol_full] = log_return_and_volatility(axis_prices);
    const std::vector<Date>& axis = ret_full.dates(); // returns axis

    // Raw covariate levels on the trading axis (forward-filled).
    const CountyCaseTable cases = read_county_cases(c.cases_path);
    const NationalSeries us = national_series(cases.records);
    const MotifTable motifs = read_motif_table(motifs_path);
    const auto trends = read_trends_csv(c.trends_path);

    const DailySeries* covid19_us = nullptr;
    for (const auto& [query, series] : trends) {
        if (canonical_query_name(query) == "covid_19_us") covid19_us = &series;
    }
    if (!covid19_us) {
        throw MissingUpstream("egarch stage requires a 'Covid 19 US' query in " + c.trends_path);
    }

    const DailySeries axis_series(std::vector<Date>(axis),
                                  std::vector<double>(axis.size(), 0.0), CalendarKind::trading);

    // ln(1+x) first differences on the trading axis, then lags 1 and 2.
    const auto log1p_diff_lag = [&](const DailySeries& level, int lag,
                                    std::vector<double>& values, std::vector<char>& avail) {
        const StandardizedSeries aligned = align_to_trading_days(as_masked(level), axis_series);
        const std::size_t n = axis.size();
        values.assign(n, 0.0);
        avail.assign(n, 0);
        for (std::size_t t = 0; t < n; ++t) {
            const long i = long(t) - lag;
            if (i < 1) continue;
            if (!aligned.available[i] || !aligned.available[i - 1]) continue;
            if (aligned.values[i] < 0.0 || aligned.values[i - 1] < 0.0) continue;
            values[t] = std::log1p(aligned.values[i]) - std::log1p(aligned.values[i - 1]);
            avail[t] = 1;
        }
    };

    const DailySeries deaths = us.total_deaths;
    const DailySeries edges(motifs.dates, motifs.columns.at("E"));
    const DailySeries t2(motifs.dates, motifs.columns.at("T2"));

    struct Cov {
        std::string name;
        std::vector<double> values;
        std::vector<char> avail;
    };
    std::vector<Cov> covs;
    const std::vector<std::pair<std::string, const DailySeries*>> bases = {
        {"us_total_deaths", &deaths}, {"edges", &edges}, {"t2", &t2}, {"covid_19_us", covid19_us}};
    for (const auto& [name, series] : bases) {
        for (int lag : {1, 2}) {
            Cov cv;
            cv.name = name + "_lag" + std::to_string(lag);
            log1p_diff_lag(*series, lag, cv.values, cv.avail);
            covs.push_back(std::move(cv));
        }
    }

    // Common sample: both models fit where every covariate is defined.
    std::size_t first_valid = axis.size();
    for (std::size_t t = 0; t < axis.size(); ++t) {
        bool ok = true;
        for (const auto& cv : covs) ok = ok && cv.avail[t];
        if (ok) {
            first_valid = t;
            break;
        }
    }
    if (first_valid == axis.size()) throw Error("egarch: no dates with all covariates defined");
    const std::size_t n = axis.size() - first_valid;
    if (n < 30) throw Error("egarch: fewer than 30 usable returns");
    for (std::size_t t = first_valid; t < axis.size(); ++t) {
        for (const auto& cv : covs) {
            if (!cv.avail[t]) throw Error("egarch: covariate gap at " + axis[t].iso());
        }
    }

    std::vector<double> returns(ret_full.values().begin() + long(first_valid),
                                ret_full.values().end());
    Eigen::MatrixXd X(long(n), long(covs.size()));
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t l = 0; l < covs.size(); ++l) {
            X(long(t), long(l)) = covs[l].values[first_valid + t];
        }
    }

    const EgarchFit fit0 = fit_egarch(returns, nullptr);
    const EgarchFit fitX = fit_egarch(returns, &X);

    std::vector<std::string> cov_names;
    for (const auto& cv : covs) cov_names.push_back(cv.name);
    const EgarchComparison cmp = compare_models(fit0, fitX, cov_names);

    auto out = open_output(out_path(c, "egarch_comparison.csv"));
    out << kEgarchComparisonHeader << '\n';
    for (const auto& row : cmp.rows) {
        out << row.parameter << ',';
        out << (row.in_model0 ? fmt_g(row.coef0, 6) : "") << ','
            << (row.t0_valid ? fmt_g(row.t0, 6) : "") << ','
            << (row.in_modelX ? fmt_g(row.coefX, 6) : "") << ','
            << (row.tX_valid ? fmt_g(row.tX, 6) : "") << '\n';
    }
    out << "loglik," << fmt_g(cmp.loglik0, 10) << ",," << fmt_g(cmp.loglikX, 10) << ",\n";
    out << "aic_norm," << fmt_g(cmp.aic0, 10) << ",," << fmt_g(cmp.aicX, 10) << ",\n";
    out << "bic_norm," << fmt_g(cmp.bic0, 10) << ",," << fmt_g(cmp.bicX, 10) << ",\n";

    const auto dump_sigma = [&](const EgarchFit& fit, const std::string& file) {
        auto sig = open_output(out_path(c, file));
        sig << kEgarchSigmaHeader << '\n';
        for (std::size_t t = 0; t < n; ++t) {
            sig << axis[first_valid + t].iso() << ',' << fmt_g(returns[t]) << ','
                << fmt_g(std::sqrt(fit.sigma2[t])) << '\n';
        }
    };
    dump_sigma(fit0, "egarch_sigma_model0.csv");
    dump_sigma(fitX, "egarch_sigma_modelx.csv");
    return n;
}

namespace {

struct StageTimer {
    std::string name;
    std::chrono::steady_clock::time_point begin = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - begin).count();
    }
};

nlohmann::json config_snapshot(const RunConfig& c) {
    nlohmann::json j;
    j["cases"] = c.cases_path;
    j["geo"] = c.geo_path;
    j["prices"] = c.prices_path;
    j["trends"] = c.trends_path;
    j["world"] = c.world_path;
    j["gamma"] = c.gamma;
    j["lambda"] = c.lambda;
    j["delta"] = c.delta;
    j["z_window"] = c.z_window;
    j["ap_window"] = c.ap_window;
    j["max_lag"] = c.max_lag;
    j["horizons"] = c.horizons;
    j["n_trees"] = c.n_trees;
    j["mtry"] = c.mtry;
    j["min_leaf"] = c.min_leaf;
    j["seed"] = c.seed.value();
    j["split_date"] = c.split_date.iso();
    j["direct_horizons"] = c.direct_horizons;
    j["start"] = c.start.iso();
    j["end"] = c.end.iso();
    j["out"] = c.output_dir;
    j["jobs"] = c.jobs;
    j["alpha_causality"] = c.alpha_causality;
    return j;
}

} // namespace

void run_all(const RunConfig& c) {
    validate_config(c);
    ensure_output_dir(c);

    nlohmann::json manifest;
    manifest["tool"] = "spreadnet";
    manifest["version"] = kToolVersion;
    manifest["config"] = config_snapshot(c);

    nlohmann::json inputs;
    const auto record_input = [&](const char* key, const std::string& path) {
        // a missing input is the owning stage's failure to report, not ours
        nlohmann::json entry = {{"path", path}};
        entry["fnv1a64"] = fs::exists(path) ? nlohmann::json(file_checksum(path))
                                            : nlohmann::json(nullptr);
        inputs[key] = std::move(entry);
    };
    record_input("cases", c.cases_path);
    record_input("geo", c.geo_path);
    record_input("prices", c.prices_path);
    record_input("trends", c.trends_path);
    if (!c.world_path.empty()) record_input("world", c.world_path);
    manifest["inputs"] = inputs;

    nlohmann::json stages = nlohmann::json::array();
    const auto run_stage = [&](const char* name, auto&& fn) {
        StageTimer timer{name};
        std::size_t rows = 0;
        try {
            rows = fn();
        } catch (const std::exception& e) {
            throw StageError(name, exit_code_for(e), e.what());
        }
        stages.push_back({{"name", name}, {"rows", rows}, {"seconds", timer.seconds()}});
    };
    run_stage("network", [&] { return stage_network(c); });
    run_stage("motifs", [&] { return stage_motifs(c); });
    run_stage("correlate", [&] { return stage_correlate(c); });
    run_stage("granger", [&] { return stage_granger(c); });
    run_stage("forecast", [&] { return stage_forecast(c); });
    run_stage("egarch", [&] { return stage_egarch(c); });
    manifest["stages"] = stages;

    // checksums of every artifact (manifest itself excluded)
    nlohmann::json outputs;
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(c.output_dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), c.output_dir).generic_string();
        if (rel == "manifest.json") continue;
        files.push_back(rel);
    }
    std::sort(files.begin(), files.end());
    for (const auto& rel : files) {
        outputs[rel] = file_checksum((fs::path(c.output_dir) / rel).string());
    }
    manifest["outputs"] = outputs;

    auto out = open_output(out_path(c, "manifest.json"));
    out << manifest.dump(2) << '\n';
}

} // namespace spreadnet
