// Acceptance suite: exercises every acceptance criterion end to end and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "spreadnet/daily_series.hpp"
#include "spreadnet/egarch.hpp"
#include "spreadnet/errors.hpp"
#include "spreadnet/forecast.hpp"
#include "spreadnet/granger.hpp"
#include "spreadnet/ingest.hpp"
#include "spreadnet/motifs.hpp"
#include "spreadnet/network.hpp"
#include "spreadnet/pipeline.hpp"
#include "spreadnet/random_forest.hpp"
#include "spreadnet/rng.hpp"
#include "spreadnet/spearman.hpp"
#include "test_util.hpp"

using namespace spreadnet;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("criterion %d (%s): %s%s%s\n", criterion, name.c_str(), pass ? "PASS" : "FAIL",
                detail.empty() ? "" : " - ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Brute-force induced-subgraph classifier (independent of the library).
struct OracleCounts {
    long long t1 = 0, t2 = 0;
    std::array<long long, 6> m{};
};

OracleCounts oracle_census(const SpreadGraph& g) {
    const int n = g.node_count();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (const auto& [a, b] : g.edges) adj[a][b] = adj[b][a] = 1;
    OracleCounts out;
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            for (int c = b + 1; c < n; ++c) {
                const int e = adj[a][b] + adj[a][c] + adj[b][c];
                if (e == 3) ++out.t2;
                else if (e == 2) ++out.t1;
            }
        }
    }
    const auto connected4 = [&](int a, int b, int c, int d) {
        const int vs[4] = {a, b, c, d};
        int seen_mask = 1, frontier = 1;
        while (frontier) {
            int next = 0;
            for (int i = 0; i < 4; ++i) {
                if (!(frontier >> i & 1)) continue;
                for (int j = 0; j < 4; ++j) {
                    if (!(seen_mask >> j & 1) && adj[vs[i]][vs[j]]) {
                        seen_mask |= 1 << j;
                        next |= 1 << j;
                    }
                }
            }
            frontier = next;
        }
        return seen_mask == 15;
    };
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            for (int c = b + 1; c < n; ++c) {
                for (int d = c + 1; d < n; ++d) {
                    if (!connected4(a, b, c, d)) continue;
                    const int vs[4] = {a, b, c, d};
                    int edges = 0, maxdeg = 0;
                    for (int i = 0; i < 4; ++i) {
                        int deg = 0;
                        for (int j = 0; j < 4; ++j) {
                            if (i != j && adj[vs[i]][vs[j]]) ++deg;
                        }
                        edges += deg;
                        maxdeg = std::max(maxdeg, deg);
                    }
                    edges /= 2;
                    if (edges == 3 && maxdeg == 2) ++out.m[0];
                    else if (edges == 3) ++out.m[1];
                    else if (edges == 4 && maxdeg == 2) ++out.m[2];
                    else if (edges == 4) ++out.m[3];
                    else if (edges == 5) ++out.m[4];
                    else ++out.m[5];
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- criteria

void criterion_1_motif_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(20200411);
    int checked = 0, mismatches = 0;
    for (double p = 0.1; p <= 0.91; p += 0.1) {
        for (int rep = 0; rep < 13; ++rep) {
            const int n = 5 + int(rng.bounded(8)); // 5..12
            const auto g = testutil::erdos_renyi(n, p, rng);
            const auto expect = oracle_census(g);
            const auto census = census_graph(g, CensusBackend::fast);
            if (census.T1 != expect.t1 || census.T2 != expect.t2 || census.M != expect.m) {
                ++mismatches;
            }
            ++checked;
        }
    }
    const double secs = seconds_since(t0);
    char detail[160];
    std::snprintf(detail,sizeof detail, "%d graphs, %d mismatches, %.2f s", checked, mismatches,
                  secs);
    report(1, "motif census equals exhaustive enumeration", checked >= 100 && mismatches == 0 &&
           secs < 60.0, detail);
}

void criterion_2_motif_scale() {
    SplitMix64 rng(514);
    const auto g = testutil::gnm_graph(514, 3831, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const auto census = census_graph(g, CensusBackend::fast);
    const double secs = seconds_since(t0);
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "514 nodes / 3831 edges in %.3f s (T2=%lld, TotM=%lld)", secs,
                  (long long)census.T2, (long long)census.tot_m());
    report(2, "motif census scales to the paper's graph size", secs < 10.0, detail);
}

void criterion_3_network_reproduction() {
    // Needs a real NYT county snapshot covering 2020-04-10/11. The repo
    // bundles county centroids; the cases snapshot must be supplied (env
    // SPREADNET_NYT_CASES or data/nyt_us_counties.csv) since it cannot be
    // redistributed here.
    const char* env_cases = std::getenv("SPREADNET_NYT_CASES");
    const char* env_geo = std::getenv("SPREADNET_GEO");
    const std::string geo_path =
        env_geo ? env_geo : std::string(SPREADNET_DATA_DIR) + "/county_centroids.csv";
    const std::string cases_path =
        env_cases ? env_cases : std::string(SPREADNET_DATA_DIR) + "/nyt_us_counties.csv";

    if (!fs::exists(cases_path)) {
        report(3, "network reproduction vs published 514/3831",
               false,
               "NYT county-cases snapshot not present (expects " + cases_path +
                   " or env SPREADNET_NYT_CASES); cannot verify without the data");
        return;
    }
    if (!fs::exists(geo_path)) {
        report(3, "network reproduction vs published 514/3831", false,
               "county centroid table missing: " + geo_path);
        return;
    }

    const auto cases = read_county_cases(cases_path);
    const auto geo = read_geo_csv(geo_path);
    const Date day = Date::from_ymd(2020, 4, 11);

    const auto close_enough = [](long long v, long long target) {
        return std::llabs(v - target) <= (long long)std::llround(0.05 * double(target));
    };

    // gating by daily new cases
    std::map<std::string, long long> new_on_day, cum_on_day;
    for (const auto& [fips, series] : new_cases(cases.records)) {
        const std::size_t i = series.index_of(day);
        if (i != DailySeries::npos) new_on_day[fips] = (long long)series.value_at(i);
    }
    for (const auto& rec : cases.records) {
        if (rec.date <= day) cum_on_day[rec.fips] = rec.cumulative_cases;
    }

    const auto g_new = build_spread_graph(day, new_on_day, geo, 5, 5, 100.0);
    const bool new_ok = close_enough(g_new.node_count(), 514) && close_enough(g_new.edge_count(), 3831);
    const auto g_cum = build_spread_graph(day, cum_on_day, geo, 5, 5, 100.0);
    const bool cum_ok = close_enough(g_cum.node_count(), 514) && close_enough(g_cum.edge_count(), 3831);

    char detail[240];
    std::snprintf(detail, sizeof detail,
                  "daily-new gating: V=%d E=%lld; cumulative gating: V=%d E=%lld; target 514/3831 "
                  "+/-5%%; matching convention: %s",
                  g_new.node_count(), g_new.edge_count(), g_cum.node_count(), g_cum.edge_count(),
                  new_ok ? "daily new cases" : (cum_ok ? "cumulative cases" : "none"));
    report(3, "network reproduction vs published 514/3831", new_ok || cum_ok, detail);
}

void criterion_4_granger_power_and_size() {
    // power: beta = 0.9, sigma = 0.01, n = 200, d = 1, alpha = 0.01
    int power_rejections = 0;
    for (int rep = 0; rep < 200; ++rep) {
        SplitMix64 rng(mix_seed(1000, std::uint64_t(rep)));
        const std::size_t n = 200;
        std::vector<double> x(n), y(n, 0.0);
        for (auto& v : x) v = rng.normal();
        for (std::size_t t = 1; t < n; ++t) y[t] = 0.9 * x[t - 1] + 0.01 * rng.normal();
        if (granger_test(y, x, 1).p_value < 0.01) ++power_rejections;
    }

    // size: independent AR(1) pairs, d = 3, alpha = 0.05
    int size_rejections = 0;
    for (int rep = 0; rep < 500; ++rep) {
        SplitMix64 rng(mix_seed(2000, std::uint64_t(rep)));
        const std::size_t n = 200;
        std::vector<double> x(n, 0.0), y(n, 0.0);
        for (std::size_t t = 1; t < n; ++t) {
            y[t] = 0.5 * y[t - 1] + rng.normal();
            x[t] = 0.5 * x[t - 1] + rng.normal();
        }
        if (granger_test(y, x, 3).p_value < 0.05) ++size_rejections;
    }

    const double power = power_rejections / 200.0;
    const double size = size_rejections / 500.0;
    char detail[160];
    std::snprintf(detail, sizeof detail, "power %.3f (need >= 0.95), size %.3f (need in [0.01, 0.10])",
                  power, size);
    report(4, "Granger power and size", power >= 0.95 && size >= 0.01 && size <= 0.10, detail);
}

std::vector<double> simulate_egarch(const EgarchParams& p, std::size_t n, SplitMix64& rng) {
    std::vector<double> r(n);
    double log_s2_prev = p.omega0 / (1.0 - p.tau);
    double eta_prev = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double log_s2 = p.omega0 + p.omega * eta_prev + p.gamma * std::abs(eta_prev) +
                              p.tau * log_s2_prev;
        const double eta = rng.normal();
        r[t] = p.mu + std::exp(0.5 * log_s2) * eta;
        eta_prev = eta;
        log_s2_prev = log_s2;
    }
    return r;
}

void criterion_5_egarch_recovery() {
    EgarchParams truth;
    truth.mu = 0.0;
    truth.omega0 = -0.2;
    truth.omega = -0.1;
    truth.gamma = 0.15;
    truth.tau = 0.95;
    const std::vector<double> target = {truth.omega0, truth.omega, truth.gamma, truth.tau};

    int good_seeds = 0, converged_fits = 0;
    const int seeds = 50;
    for (int seed = 0; seed < seeds; ++seed) {
        SplitMix64 rng(mix_seed(3000, std::uint64_t(seed)));
        const auto r = simulate_egarch(truth, 2000, rng);
        const auto fit = fit_egarch(r, nullptr);
        if (fit.converged) ++converged_fits;
        const auto est = fit.params.pack();
        bool all_ok = true;
        for (std::size_t i = 0; i < 4; ++i) {
            const double se =
                fit.std_errors_available ? fit.std_errors[i + 1] : 0.0; // skip mu
            const double tol = std::max(0.1, 3.0 * se);
            if (std::abs(est[i + 1] - target[i]) > tol) all_ok = false;
        }
        if (all_ok) ++good_seeds;
    }

    // nesting: Model X with 8 noise covariates on one dataset
    SplitMix64 rng(mix_seed(3000, 999));
    const auto r = simulate_egarch(truth, 2000, rng);
    Eigen::MatrixXd X(2000, 8);
    for (long i = 0; i < X.rows(); ++i) {
        for (long j = 0; j < X.cols(); ++j) X(i, j) = 0.01 * rng.normal();
    }
    const auto fit0 = fit_egarch(r, nullptr);
    const auto fitX = fit_egarch(r, &X);
    const bool nested = fitX.loglik >= fit0.loglik - 1e-6;
    const bool k_diff = (fitX.k - fit0.k) == 8;

    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "%d/%d seeds within max(0.1, 3*SE) (need >= 45), %d converged; nesting %s "
                  "(llX-ll0 = %.3g), k diff %s",
                  good_seeds, seeds, converged_fits, nested ? "ok" : "violated",
                  fitX.loglik - fit0.loglik, k_diff ? "ok" : "wrong");
    report(5, "EGARCH simulation recovery and nesting",
           good_seeds >= 45 && nested && k_diff, detail);
}

void criterion_6_spearman_exactness() {
    SplitMix64 rng(6000);
    bool exact_ok = true, invariance_ok = true;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 5 + rng.bounded(60);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = rng.normal();
            y[i] = rng.normal();
        }
        // closed form on tie-free data
        const auto rank_of = [n](const std::vector<double>& v) {
            std::vector<double> ranks(n);
            for (std::size_t i = 0; i < n; ++i) {
                double rank = 1.0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (v[j] < v[i]) rank += 1.0;
                }
                ranks[i] = rank;
            }
            return ranks;
        };
        const auto rx = rank_of(x), ry = rank_of(y);
        double sum_d2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum_d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
        const double nn = double(n);
        const double rho_formula = 1.0 - 6.0 * sum_d2 / (nn * (nn * nn - 1.0));
        const auto r = spearman(x, y);
        if (std::abs(r.rho - rho_formula) > 1e-12) exact_ok = false;

        // strictly increasing transforms
        std::vector<double> fx(n), gy(n);
        for (std::size_t i = 0; i < n; ++i) {
            fx[i] = std::exp(x[i]);
            gy[i] = 5.0 * y[i] + std::tanh(y[i]);
        }
        const auto r2 = spearman(fx, gy);
        if (std::abs(r.rho - r2.rho) > 1e-14 || std::abs(r.p_value - r2.p_value) > 1e-12) {
            invariance_ok = false;
        }
    }
    report(6, "Spearman closed-form exactness and monotone invariance",
           exact_ok && invariance_ok,
           std::string("closed form ") + (exact_ok ? "exact" : "mismatch") + ", invariance " +
               (invariance_ok ? "exact" : "violated"));
}

void criterion_7_random_forest() {
    SplitMix64 rng(7000);
    const std::size_t n = 500;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = rng.uniform01() * 2.0 - 1.0;
        y[i] = 2.0 * x[i] + 0.1 * rng.normal();
    }
    const DataView view{x.data(), y.data(), n, 1};
    ForestConfig cfg;
    cfg.n_trees = 100;
    cfg.min_leaf = 5;
    cfg.seed = 7;
    const auto m1 = fit_forest(view, cfg, 1);
    const auto m2 = fit_forest(view, cfg, 1);

    std::vector<double> xt(200), yt(200);
    for (std::size_t i = 0; i < 200; ++i) {
        xt[i] = rng.uniform01() * 2.0 - 1.0;
        yt[i] = 2.0 * xt[i] + 0.1 * rng.normal();
    }
    const double train_mean = std::accumulate(y.begin(), y.end(), 0.0) / double(n);
    double sse_model = 0.0, sse_mean = 0.0;
    bool identical = true;
    for (std::size_t i = 0; i < 200; ++i) {
        const double p1 = m1.predict({&xt[i], 1});
        if (p1 != m2.predict({&xt[i], 1})) identical = false;
        sse_model += (yt[i] - p1) * (yt[i] - p1);
        sse_mean += (yt[i] - train_mean) * (yt[i] - train_mean);
    }
    const double rmse_model = std::sqrt(sse_model / 200.0);
    const double rmse_mean = std::sqrt(sse_mean / 200.0);
    const bool beats_mean = rmse_model <= 0.5 * rmse_mean;

    // split vs brute-force scan on random frames
    bool splits_ok = true;
    for (int rep = 0; rep < 10; ++rep) {
        const std::size_t rows = 30 + rng.bounded(170);
        const std::size_t cols = 1 + rng.bounded(4);
        std::vector<double> fx(rows * cols), fy(rows);
        for (auto& v : fx) v = rng.normal();
        for (std::size_t r = 0; r < rows; ++r) fy[r] = 1.5 * fx[r * cols] + 0.3 * rng.normal();
        const DataView fview{fx.data(), fy.data(), rows, cols};
        std::vector<std::size_t> idx(rows);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<int> feats(cols);
        std::iota(feats.begin(), feats.end(), 0);
        const auto split = best_split(fview, idx, feats, 2);

        double oracle = std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < cols; ++f) {
            std::vector<double> vals;
            for (std::size_t r = 0; r < rows; ++r) vals.push_back(fx[r * cols + f]);
            auto cuts = vals;
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const double cut = 0.5 * (cuts[i] + cuts[i + 1]);
                std::vector<double> yl, yr;
                for (std::size_t r = 0; r < rows; ++r) (vals[r] < cut ? yl : yr).push_back(fy[r]);
                if (yl.size() < 2 || yr.size() < 2) continue;
                const auto sse = [](const std::vector<double>& v) {
                    const double m = std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
                    double s = 0.0;
                    for (double t : v) s += (t - m) * (t - m);
                    return s;
                };
                oracle = std::min(oracle, sse(yl) + sse(yr));
            }
        }
        if (!split.found || std::abs(split.rss - oracle) > 1e-8 * std::max(1.0, oracle)) {
            splits_ok = false;
        }
    }

    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "rmse %.4f vs mean-predictor %.4f (need <= 50%%), refit %s, splits %s",
                  rmse_model, rmse_mean, identical ? "bit-identical" : "DIFFER",
                  splits_ok ? "match brute force" : "MISMATCH");
    report(7, "random forest sanity", beats_mean && identical && splits_ok, detail);
}

RunConfig fixture_config(const std::string& out_dir) {
    RunConfig c;
    for (const auto& [key, value] :
         parse_config_file(std::string(SPREADNET_FIXTURE_DIR) + "/config.txt")) {
        apply_config_entry(c, key, value);
    }
    c.cases_path = std::string(SPREADNET_FIXTURE_DIR) + "/cases.csv";
    c.geo_path = std::string(SPREADNET_FIXTURE_DIR) + "/geo.csv";
    c.prices_path = std::string(SPREADNET_FIXTURE_DIR) + "/prices.csv";
    c.trends_path = std::string(SPREADNET_FIXTURE_DIR) + "/trends.csv";
    c.world_path = std::string(SPREADNET_FIXTURE_DIR) + "/world.csv";
    c.output_dir = out_dir;
    return c;
}

std::map<std::string, std::string> artifact_checksums(const std::string& dir) {
    std::map<std::string, std::string> sums;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string rel = fs::relative(entry.path(), dir).generic_string();
        if (rel == "manifest.json") continue;
        sums[rel] = file_checksum(entry.path().string());
    }
    return sums;
}

std::string g_run_dir; // set by criterion 8, reused by criterion 9

void criterion_8_pipeline_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string out1 = testutil::temp_dir("acceptance_run_a");
    const std::string out2 = testutil::temp_dir("acceptance_run_b");
    bool ok = true;
    std::string detail;
    try {
        run_all(fixture_config(out1));
        run_all(fixture_config(out2));
        const auto sums1 = artifact_checksums(out1);
        const auto sums2 = artifact_checksums(out2);
        ok = sums1 == sums2 && !sums1.empty();
        const double secs = seconds_since(t0);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu artifacts, checksums %s, %.1f s for two runs (< 240 s)",
                      sums1.size(), ok ? "identical" : "DIFFER", secs);
        detail = buf;
        ok = ok && secs < 240.0; // two runs; the criterion allows 2 min per run
        g_run_dir = out1;
    } catch (const std::exception& e) {
        ok = false;
        detail = e.what();
    }
    report(8, "pipeline determinism on the bundled fixture", ok, detail);
}

void criterion_9_table_schemas() {
    if (g_run_dir.empty()) {
        report(9, "emitted tables match the documented schemas", false,
               "no pipeline run available (criterion 8 failed)");
        return;
    }
    const std::vector<std::pair<std::string, std::string>> expected = {
        {"network_features.csv", kNetworkFeaturesHeader},
        {"motifs.csv", kMotifsHeader},
        {"corr_covid.csv", kCorrelationHeader},
        {"corr_spread.csv", kCorrelationHeader},
        {"corr_trends.csv", kCorrelationHeader},
        {"granger_covid.csv", kCausalityHeader},
        {"granger_spread.csv", kCausalityHeader},
        {"granger_trends.csv", kCausalityHeader},
        {"forecast_delta.csv", kDeltaHeader},
        {"predictions_h1.csv", kPredictionsHeader},
        {"egarch_comparison.csv", kEgarchComparisonHeader},
        {"egarch_sigma_model0.csv", kEgarchSigmaHeader},
        {"egarch_sigma_modelx.csv", kEgarchSigmaHeader},
    };
    int bad = 0;
    std::string first_bad;
    for (const auto& [file, header] : expected) {
        std::ifstream in(g_run_dir + "/" + file);
        std::string line;
        if (!in || !std::getline(in, line)) {
            ++bad;
            if (first_bad.empty()) first_bad = file + " missing";
            continue;
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != header) {
            ++bad;
            if (first_bad.empty()) first_bad = file + " header '" + line + "'";
        }
    }
    char detail[200];
    std::snprintf(detail, sizeof detail, "%zu tables checked, %d mismatched%s%s", expected.size(),
                  bad, first_bad.empty() ? "" : ": ", first_bad.c_str());
    report(9, "emitted tables match the documented schemas", bad == 0, detail);
}

} // namespace

int main() {
    std::printf("spreadnet acceptance suite\n");
    criterion_1_motif_oracle();
    criterion_2_motif_scale();
    criterion_3_network_reproduction();
    criterion_4_granger_power_and_size();
    criterion_5_egarch_recovery();
    criterion_6_spearman_exactness();
    criterion_7_random_forest();
    criterion_8_pipeline_determinism();
    criterion_9_table_schemas();
    std::printf("%d of 9 criteria failed\n", g_failures);
    return g_failures;
}
