#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spreadnet/dates.hpp"
#include "spreadnet/forecast.hpp"
#include "spreadnet/granger.hpp"

namespace spreadnet {

inline constexpr const char* kToolVersion = "0.1.0";

// Output schemas (header lines) shared by the writers and their tests.
inline constexpr const char* kNetworkFeaturesHeader = "date,V,E,GC";
inline constexpr const char* kMotifsHeader = "date,V,E,GC,T1,T2,M1,M2,M3,M4,M5,M6,TotM";
inline constexpr const char* kCorrelationHeader = "variable,lag,rho,p";
inline constexpr const char* kCausalityHeader = "variable,lag,target,F,p,flag";
inline constexpr const char* kDeltaHeader = "model,horizon,rmse,delta";
inline constexpr const char* kPredictionsHeader = "date,observed,predicted,model";
inline constexpr const char* kEgarchComparisonHeader =
    "parameter,model0_coef,model0_t,modelX_coef,modelX_t";
inline constexpr const char* kEgarchSigmaHeader = "date,ret,sigma";

struct RunConfig {
    // input paths
    std::string cases_path;
    std::string geo_path;
    std::string prices_path;
    std::string trends_path;
    std::string world_path; // optional: world cumulative counts

    // network construction
    long long gamma = 5;
    long long lambda = 5;
    double delta = 100.0;

    // transforms / stats
    int z_window = 7;
    int ap_window = 148;
    int max_lag = 7;

    // forecasting
    std::vector<int> horizons = {1, 2, 3, 4, 5, 6};
    int n_trees = 500;
    int mtry = 0; // 0 => ceil(p/3)
    int min_leaf = 5;
    std::optional<std::uint64_t> seed;
    Date split_date = Date::from_ymd(2020, 3, 1);
    bool direct_horizons = true;

    // analysis window
    Date start = Date::from_ymd(2020, 1, 2);
    Date end = Date::from_ymd(2020, 5, 29);

    std::string output_dir;
    int jobs = 1;

    double alpha_causality = 0.10;
};

/// Flat key=value config file ('#' comments). Unknown keys are rejected.
std::map<std::string, std::string> parse_config_file(const std::string& path);
/// Apply one key=value pair onto the config; throws ConfigError.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);
/// Checks invariants (seed present, thresholds positive, paths set).
void validate_config(const RunConfig& config);

// Individual stages; each reads upstream artifacts from output_dir, throws
// MissingUpstream (naming the file) when they are absent, and returns the
// row count of its primary output.
std::size_t stage_network(const RunConfig& config);
std::size_t stage_motifs(const RunConfig& config);
std::size_t stage_correlate(const RunConfig& config);
std::size_t stage_granger(const RunConfig& config);
std::size_t stage_forecast(const RunConfig& config, const std::vector<ModelSpec>& models = {});
std::size_t stage_egarch(const RunConfig& config);

/// Full run: network -> motifs -> correlate -> granger -> forecast -> egarch,
/// then the run manifest. Stage failures propagate with the stage name in
/// the message.
void run_all(const RunConfig& config);

/// The trading-day panel every stats stage consumes: AP, Vol, standardized
/// Covid / spread / trend covariates aligned to trading dates in
/// [config.start, config.end]. Requires motifs.csv.
SeriesBundle build_bundle(const RunConfig& config);

/// Names of Covid-level covariates present in a bundle, in table order.
std::vector<std::string> covid_variable_names(const SeriesBundle& bundle);
/// Spread-network covariates, in table order (V..TotM).
std::vector<std::string> spread_variable_names();
/// Canonicalized trend queries present in a bundle, sorted.
std::vector<std::string> trend_variable_names(const SeriesBundle& bundle);

/// Lowercased, spaces to underscores ("Covid-19 US" -> "covid-19_us").
std::string canonical_query_name(const std::string& query);

/// FNV-1a 64-bit checksum of a file's bytes, hex-encoded.
std::string file_checksum(const std::string& path);

} // namespace spreadnet
