#pragma once

#include <map>
#include <string>
#include <vector>

#include "spreadnet/dates.hpp"
#include "spreadnet/random_forest.hpp"

namespace spreadnet {

/// Forecast model menu. P0 is the lag-only baseline; P1..P4 add covariate
/// families (deaths, spread-network features, search trends, a mix).
enum class ModelSpec { P0, P1, P2, P3, P4 };

const char* to_string(ModelSpec m);
ModelSpec parse_model_spec(const std::string& name); // throws UnknownSpec

struct FeatureRef {
    std::string series;
    int lag = 1;
};

/// The predictor list for each model, against canonical bundle names
/// ("AP", "us_total_deaths", "world_new_deaths", "E", "GC", "T2", "M4",
/// "covid-19_us", "covid_19_us", "covid-19_world").
std::vector<FeatureRef> model_features(ModelSpec spec);

struct BundleColumn {
    std::vector<double> values;
    std::vector<char> available; // empty means all available
};

/// Named series sharing one trading-day axis.
struct SeriesBundle {
    std::vector<Date> dates;
    std::map<std::string, BundleColumn> columns;
    std::string target = "AP";
};

struct SupervisedFrame {
    std::vector<std::string> feature_names;
    std::vector<double> x; // row-major
    std::vector<double> y;
    std::vector<Date> dates; // target dates
    int horizon = 1;

    std::size_t n_rows() const { return y.size(); }
    std::size_t n_features() const { return feature_names.size(); }
    DataView view() const {
        return {x.data(), y.data(), n_rows(), n_features()};
    }
};

/// Assemble the supervised frame for one model and horizon. With
/// direct_horizon, "lag l" reads the value at t-h-l+1 so a single fitted
/// model is an h-step-ahead forecaster; without it, features sit at t-l for
/// every h. Rows with any unavailable value are dropped.
/// Throws UnknownSpec / EmptyFrame (the latter also when a referenced series
/// is absent from the bundle).
SupervisedFrame build_frame(ModelSpec spec, const SeriesBundle& bundle, int horizon,
                            bool direct_horizon = true);
SupervisedFrame build_frame(const std::vector<FeatureRef>& features, const SeriesBundle& bundle,
                            int horizon, bool direct_horizon = true);

struct ModelEval {
    ModelSpec model = ModelSpec::P0;
    int horizon = 1;
    double rmse = 0.0;
    double delta = 0.0; // (1 - rmse/rmse_P0) * 100; 0 for P0 itself
    std::size_t n_test = 0;
    std::string note; // set when the model could not be evaluated
};

struct PredictionRow {
    Date date;
    double observed = 0.0;
    double predicted = 0.0;
    ModelSpec model = ModelSpec::P0;
    int horizon = 1;
};

struct EvaluateResult {
    std::vector<ModelEval> table;
    std::vector<PredictionRow> predictions;
};

/// Train on target dates strictly before `split`, test at/after it. All
/// evaluated models at one horizon share the same test dates (intersection),
/// so the RMSE ratio compares like with like. Throws EmptyTest when the
/// baseline has no test rows.
EvaluateResult evaluate(const std::vector<ModelSpec>& models, const SeriesBundle& bundle,
                        const std::vector<int>& horizons, Date split, const ForestConfig& rf,
                        int jobs = 1, bool direct_horizon = true);

} // namespace spreadnet
