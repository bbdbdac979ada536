#include "spreadnet/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spreadnet/errors.hpp"

namespace spreadnet {

const char* to_string(ModelSpec m) {
    switch (m) {
        case ModelSpec::P0: return "P0";
        case ModelSpec::P1: return "P1";
        case ModelSpec::P2: return "P2";
        case ModelSpec::P3: return "P3";
        case ModelSpec::P4: return "P4";
    }
    return "?";
}

ModelSpec parse_model_spec(const std::string& name) {
    if (name == "P0") return ModelSpec::P0;
    if (name == "P1") return ModelSpec::P1;
    if (name == "P2") return ModelSpec::P2;
    if (name == "P3") return ModelSpec::P3;
    if (name == "P4") return ModelSpec::P4;
    throw UnknownSpec("unknown model spec '" + name + "' (expected P0..P4)");
}

std::vector<FeatureRef> model_features(ModelSpec spec) {
    std::vector<FeatureRef> f = {{"AP", 1}, {"AP", 2}, {"AP", 3}};
    switch (spec) {
        case ModelSpec::P0:
            break;
        case ModelSpec::P1:
            for (int l = 1; l <= 3; ++l) f.push_back({"us_total_deaths", l});
            for (int l = 1; l <= 3; ++l) f.push_back({"world_new_deaths", l});
            break;
        case ModelSpec::P2:
            for (const char* s : {"E", "GC", "T2", "M4"}) {
                for (int l = 1; l <= 3; ++l) f.push_back({s, l});
            }
            break;
        case ModelSpec::P3:
            for (int l = 1; l <= 2; ++l) f.push_back({"covid-19_us", l});
            for (int l = 1; l <= 2; ++l) f.push_back({"covid_19_us", l});
            for (int l = 1; l <= 2; ++l) f.push_back({"covid-19_world", l});
            break;
        case ModelSpec::P4:
            for (int l = 1; l <= 2; ++l) f.push_back({"covid-19_us", l});
            for (int l = 1; l <= 2; ++l) f.push_back({"covid_19_us", l});
            for (int l = 1; l <= 2; ++l) f.push_back({"T2", l});
            for (int l = 1; l <= 2; ++l) f.push_back({"us_total_deaths", l});
            break;
    }
    return f;
}

SupervisedFrame build_frame(ModelSpec spec, const SeriesBundle& bundle, int horizon,
                            bool direct_horizon) {
    return build_frame(model_features(spec), bundle, horizon, direct_horizon);
}

SupervisedFrame build_frame(const std::vector<FeatureRef>& features, const SeriesBundle& bundle,
                            int horizon, bool direct_horizon) {
    if (horizon < 1) throw EmptyFrame("build_frame: horizon must be >= 1");
    const auto target_it = bundle.columns.find(bundle.target);
    if (target_it == bundle.columns.end()) {
        throw EmptyFrame("build_frame: bundle lacks target series '" + bundle.target + "'");
    }

    std::vector<const BundleColumn*> cols;
    cols.reserve(features.size());
    for (const auto& ref : features) {
        const auto it = bundle.columns.find(ref.series);
        if (it == bundle.columns.end()) {
            throw EmptyFrame("build_frame: bundle lacks series '" + ref.series + "'");
        }
        cols.push_back(&it->second);
    }

    SupervisedFrame frame;
    frame.horizon = horizon;
    for (const auto& ref : features) {
        frame.feature_names.push_back(ref.series + "_lag" + std::to_string(ref.lag));
    }

    const std::size_t n = bundle.dates.size();
    const int extra = direct_horizon ? horizon - 1 : 0;
    const BundleColumn& target = target_it->second;

    std::vector<double> row(features.size());
    for (std::size_t t = 0; t < n; ++t) {
        if (!target.available.empty() && !target.available[t]) continue;
        bool ok = true;
        for (std::size_t k = 0; k < features.size(); ++k) {
            // lag l means the value at t - h - l + 1 under direct forecasting
            const long idx = long(t) - long(features[k].lag + extra);
            if (idx < 0) {
                ok = false;
                break;
            }
            const BundleColumn& c = *cols[k];
            if (!c.available.empty() && !c.available[std::size_t(idx)]) {
                ok = false;
                break;
            }
            row[k] = c.values[std::size_t(idx)];
        }
        if (!ok) continue;
        frame.x.insert(frame.x.end(), row.begin(), row.end());
        frame.y.push_back(target.values[t]);
        frame.dates.push_back(bundle.dates[t]);
    }
    if (frame.y.empty()) throw EmptyFrame("build_frame: no usable rows");
    return frame;
}

namespace {

struct FittedFrame {
    ModelSpec model;
    SupervisedFrame frame;
    std::vector<std::size_t> train_rows;
    std::map<Date, std::size_t> test_rows;
};

double rmse_of(const std::vector<double>& err) {
    double s = 0.0;
    for (double e : err) s += e * e;
    return std::sqrt(s / double(err.size()));
}

} // namespace

EvaluateResult evaluate(const std::vector<ModelSpec>& models, const SeriesBundle& bundle,
                        const std::vector<int>& horizons, Date split, const ForestConfig& rf,
                        int jobs, bool direct_horizon) {
    // Baseline P0 is always evaluated; Delta is relative to it.
    std::vector<ModelSpec> menu = {ModelSpec::P0};
    for (ModelSpec m : models) {
        if (std::find(menu.begin(), menu.end(), m) == menu.end()) menu.push_back(m);
    }

    EvaluateResult out;
    for (int h : horizons) {
        std::vector<FittedFrame> fitted;
        std::vector<ModelEval> failed;
        for (ModelSpec m : menu) {
            try {
                FittedFrame ff;
                ff.model = m;
                ff.frame = build_frame(m, bundle, h, direct_horizon);
                for (std::size_t r = 0; r < ff.frame.n_rows(); ++r) {
                    if (ff.frame.dates[r] < split) {
                        ff.train_rows.push_back(r);
                    } else {
                        ff.test_rows.emplace(ff.frame.dates[r], r);
                    }
                }
                if (ff.train_rows.empty()) throw EmptyFrame("no training rows before split");
                fitted.push_back(std::move(ff));
            } catch (const EmptyFrame& e) {
                ModelEval bad;
                bad.model = m;
                bad.horizon = h;
                bad.rmse = std::nan("");
                bad.delta = std::nan("");
                bad.note = e.what();
                if (m == ModelSpec::P0) throw;
                failed.push_back(std::move(bad));
            }
        }

        // Common test dates so every RMSE at this horizon covers the same days.
        std::set<Date> common;
        bool first = true;
        for (const auto& ff : fitted) {
            std::set<Date> own;
            for (const auto& [d, r] : ff.test_rows) own.insert(d);
            if (first) {
                common = std::move(own);
                first = false;
            } else {
                std::set<Date> inter;
                std::set_intersection(common.begin(), common.end(), own.begin(), own.end(),
                                      std::inserter(inter, inter.begin()));
                common = std::move(inter);
            }
        }
        if (common.empty()) throw EmptyTest("evaluate: no test rows at/after split for horizon " +
                                            std::to_string(h));

        double rmse_p0 = 0.0;
        std::vector<ModelEval> evals;
        for (const auto& ff : fitted) {
            const ForestModel forest = [&] {
                ForestConfig cfg = rf;
                // distinct deterministic stream per (model, horizon)
                cfg.seed = mix_seed(rf.seed, (std::uint64_t(ff.model) << 8) | std::uint64_t(h));
                // train-only view: subset rows via index remap
                SupervisedFrame train;
                train.feature_names = ff.frame.feature_names;
                train.horizon = h;
                for (std::size_t r : ff.train_rows) {
                    const double* xr = ff.frame.x.data() + r * ff.frame.n_features();
                    train.x.insert(train.x.end(), xr, xr + ff.frame.n_features());
                    train.y.push_back(ff.frame.y[r]);
                    train.dates.push_back(ff.frame.dates[r]);
                }
                return fit_forest(train.view(), cfg, jobs);
            }();

            std::vector<double> errors;
            for (Date d : common) {
                const std::size_t r = ff.test_rows.at(d);
                const double* xr = ff.frame.x.data() + r * ff.frame.n_features();
                const double pred = forest.predict({xr, ff.frame.n_features()});
                const double obs = ff.frame.y[r];
                errors.push_back(obs - pred);
                out.predictions.push_back({d, obs, pred, ff.model, h});
            }
            ModelEval ev;
            ev.model = ff.model;
            ev.horizon = h;
            ev.rmse = rmse_of(errors);
            ev.n_test = errors.size();
            if (ff.model == ModelSpec::P0) rmse_p0 = ev.rmse;
            evals.push_back(std::move(ev));
        }
        for (auto& ev : evals) {
            ev.delta = (ev.model == ModelSpec::P0 || rmse_p0 <= 0.0)
                           ? 0.0
                           : (1.0 - ev.rmse / rmse_p0) * 100.0;
            out.table.push_back(ev);
        }
        for (auto& bad : failed) out.table.push_back(std::move(bad));
    }
    return out;
}

} // namespace spreadnet
