#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spreadnet/errors.hpp"
#include "spreadnet/pipeline.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides; // key -> value
};

void add_override(CliOptions& cli, CLI::App* cmd, const std::string& flag, const std::string& key,
                  const std::string& help) {
    const auto callback = [&cli, key](const std::string& value) {
        cli.overrides.emplace_back(key, value);
    };
    cmd->add_option_function<std::string>(flag, callback, help);
}

spreadnet::RunConfig make_config(const CliOptions& cli) {
    spreadnet::RunConfig config;
    if (!cli.config_path.empty()) {
        for (const auto& [key, value] : spreadnet::parse_config_file(cli.config_path)) {
            spreadnet::apply_config_entry(config, key, value);
        }
    }
    for (const auto& [key, value] : cli.overrides) { // flags win over the file
        spreadnet::apply_config_entry(config, key, value);
    }
    spreadnet::validate_config(config);
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spreadnet: county spread networks, motif census and market impact stats"};
    app.require_subcommand(1);
    app.set_version_flag("--version", spreadnet::kToolVersion);

    CliOptions cli;
    std::string models_csv;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", cli.config_path, "key=value config file");
        add_override(cli, cmd, "--cases", "cases", "county cases CSV");
        add_override(cli, cmd, "--geo", "geo", "county centroid CSV");
        add_override(cli, cmd, "--prices", "prices", "closing price CSV");
        add_override(cli, cmd, "--trends", "trends", "search trends CSV");
        add_override(cli, cmd, "--world", "world", "world counts CSV (optional)");
        add_override(cli, cmd, "--gamma", "gamma", "node new-case threshold");
        add_override(cli, cmd, "--lambda", "lambda", "edge new-case threshold");
        add_override(cli, cmd, "--delta", "delta", "edge distance threshold (miles)");
        add_override(cli, cmd, "--z-window", "z_window", "rolling z-score window (days)");
        add_override(cli, cmd, "--ap-window", "ap_window", "abnormal price window (trading days)");
        add_override(cli, cmd, "--max-lag", "max_lag", "max lag for correlations / causality");
        add_override(cli, cmd, "--horizons", "horizons", "forecast horizons, e.g. 1,2,3");
        add_override(cli, cmd, "--n-trees", "n_trees", "random forest size");
        add_override(cli, cmd, "--mtry", "mtry", "features per split (0 = p/3)");
        add_override(cli, cmd, "--min-leaf", "min_leaf", "minimum rows per leaf");
        add_override(cli, cmd, "--seed", "seed", "RNG seed (required)");
        add_override(cli, cmd, "--split-date", "split_date", "train/test split date");
        add_override(cli, cmd, "--start", "start", "analysis start date");
        add_override(cli, cmd, "--end", "end", "analysis end date");
        add_override(cli, cmd, "--out", "out", "output directory");
        add_override(cli, cmd, "--jobs", "jobs", "max parallelism");
        return cmd;
    };

    CLI::App* run = add_common(app.add_subcommand("run", "full pipeline plus run manifest"));
    CLI::App* network = add_common(app.add_subcommand("network", "daily spread graphs + features"));
    CLI::App* motifs = add_common(app.add_subcommand("motifs", "motif census of dumped graphs"));
    CLI::App* correlate = add_common(app.add_subcommand("correlate", "lagged Spearman tables"));
    CLI::App* granger = add_common(app.add_subcommand("granger", "Granger causality tables"));
    CLI::App* forecast = add_common(app.add_subcommand("forecast", "random-forest Delta-RMSE table"));
    forecast->add_option("--models", models_csv, "subset of P0..P4, e.g. P0,P3");
    CLI::App* egarch = add_common(app.add_subcommand("egarch", "EGARCH Model 0 vs Model X"));

    CLI11_PARSE(app, argc, argv);

    try {
        const spreadnet::RunConfig config = make_config(cli);
        if (run->parsed()) {
            spreadnet::run_all(config);
        } else if (network->parsed()) {
            spreadnet::stage_network(config);
        } else if (motifs->parsed()) {
            spreadnet::stage_motifs(config);
        } else if (correlate->parsed()) {
            spreadnet::stage_correlate(config);
        } else if (granger->parsed()) {
            spreadnet::stage_granger(config);
        } else if (forecast->parsed()) {
            std::vector<spreadnet::ModelSpec> models;
            if (!models_csv.empty()) {
                std::size_t start = 0;
                while (start <= models_csv.size()) {
                    const std::size_t comma = models_csv.find(',', start);
                    const std::string item = models_csv.substr(
                        start, comma == std::string::npos ? std::string::npos : comma - start);
                    if (!item.empty()) models.push_back(spreadnet::parse_model_spec(item));
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
            }
            spreadnet::stage_forecast(config, models);
        } else if (egarch->parsed()) {
            spreadnet::stage_egarch(config);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "spreadnet: %s\n", e.what());
        return spreadnet::exit_code_for(e);
    }
    return 0;
}
