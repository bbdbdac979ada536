#include <doctest.h>

#include <cmath>
#include <vector>

#include "spreadnet/errors.hpp"
#include "spreadnet/granger.hpp"
#include "spreadnet/rng.hpp"

using namespace spreadnet;

namespace {

std::vector<double> ar1(std::size_t n, double phi, double sigma, SplitMix64& rng) {
    std::vector<double> y(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) y[t] = phi * y[t - 1] + sigma * rng.normal();
    return y;
}

} // namespace

TEST_CASE("a zero covariate carries no information") {
    SplitMix64 rng(1);
    const auto y = ar1(80, 0.5, 1.0, rng);
    const std::vector<double> x(80, 0.0);
    const auto r = granger_test(y, x, 2);
    CHECK(r.f_stat == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(r.p_value == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.rss_restricted == doctest::Approx(r.rss_unrestricted).epsilon(1e-10));
}

TEST_CASE("a strongly causal covariate is detected") {
    SplitMix64 rng(2);
    const std::size_t n = 200;
    std::vector<double> x(n), y(n, 0.0);
    for (auto& v : x) v = rng.normal();
    for (std::size_t t = 1; t < n; ++t) y[t] = 0.9 * x[t - 1] + 0.01 * rng.normal();
    const auto r = granger_test(y, x, 1);
    CHECK(r.p_value < 0.01);
    CHECK(r.f_stat > 100.0);
    CHECK(r.n_effective == n - 1);
}

TEST_CASE("independent AR(1) pairs reject near the nominal rate") {
    SplitMix64 rng(3);
    int rejections = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
        const auto y = ar1(200, 0.5, 1.0, rng);
        const auto x = ar1(200, 0.5, 1.0, rng);
        if (granger_test(y, x, 3).p_value < 0.05) ++rejections;
    }
    // generous bound for few replicates; the acceptance suite tightens this
    CHECK(rejections <= 20);
}

TEST_CASE("nested models: restricted RSS is never below unrestricted") {
    SplitMix64 rng(4);
    for (int rep = 0; rep < 25; ++rep) {
        const auto y = ar1(120, 0.4, 1.0, rng);
        const auto x = ar1(120, 0.6, 1.0, rng);
        const auto r = granger_test(y, x, 1 + int(rng.bounded(4)));
        CHECK(r.rss_unrestricted <= r.rss_restricted + 1e-9 * (1.0 + r.rss_restricted));
        CHECK(r.f_stat >= 0.0);
    }
}

TEST_CASE("F statistic is invariant under affine rescaling") {
    SplitMix64 rng(5);
    const auto y = ar1(150, 0.5, 1.0, rng);
    const auto x = ar1(150, 0.3, 1.0, rng);
    const auto base = granger_test(y, x, 2);

    std::vector<double> y2(y.size()), x2(x.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y2[i] = -4.0 * y[i] + 17.0;
        x2[i] = 0.25 * x[i] - 3.0;
    }
    const auto scaled = granger_test(y2, x2, 2);
    CHECK(scaled.f_stat == doctest::Approx(base.f_stat).epsilon(1e-8));
    CHECK(scaled.p_value == doctest::Approx(base.p_value).epsilon(1e-8));
}

TEST_CASE("insufficient data and degenerate designs are reported") {
    SplitMix64 rng(6);
    const auto x = ar1(10, 0.5, 1.0, rng);
    const auto y = ar1(10, 0.5, 1.0, rng);
    CHECK_THROWS_AS(granger_test(y, x, 4), DegenerateInput); // 6 rows vs 9 params

    const std::vector<double> flat(50, 3.0); // constant y: lags collinear with intercept
    const auto xx = ar1(50, 0.5, 1.0, rng);
    CHECK_THROWS_AS(granger_test(flat, xx, 2), SingularDesign);
}

TEST_CASE("causality_sweep produces the full grid") {
    SplitMix64 rng(7);
    const std::size_t n = 120;

    std::vector<MaskedSeries> covariates;
    for (int i = 0; i < 8; ++i) {
        MaskedSeries s;
        s.name = "cov" + std::to_string(i);
        s.values = ar1(n, 0.4, 1.0, rng);
        covariates.push_back(std::move(s));
    }
    std::vector<MaskedSeries> targets(2);
    targets[0].name = "P";
    targets[0].values = ar1(n, 0.5, 1.0, rng);
    targets[1].name = "Vol";
    targets[1].values = ar1(n, 0.5, 1.0, rng);

    const auto cells = causality_sweep(targets, covariates, 7, 0.10);
    CHECK(cells.size() == 112); // 8 covariates x 7 lags x 2 targets

    SUBCASE("cells with too little data carry a reason") {
        MaskedSeries tiny;
        tiny.name = "tiny";
        tiny.values = ar1(n, 0.4, 1.0, rng);
        tiny.available.assign(n, 0);
        for (std::size_t i = 0; i < 12; ++i) tiny.available[i] = 1;
        const auto sparse = causality_sweep(targets, {tiny}, 7, 0.10);
        bool found_note = false;
        for (const auto& cell : sparse) {
            if (!cell.result.has_value()) {
                CHECK(cell.note == "insufficient data");
                found_note = true;
            }
        }
        CHECK(found_note);
    }
}

TEST_CASE("a covariate built to drive P flags P but not Vol") {
    SplitMix64 rng(8);
    const std::size_t n = 150;
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    std::vector<double> p(n, 0.0), vol(n);
    for (std::size_t t = 1; t < n; ++t) p[t] = 0.3 * p[t - 1] + 0.8 * x[t - 1] + 0.05 * rng.normal();
    for (auto& v : vol) v = rng.normal();

    std::vector<MaskedSeries> targets(2);
    targets[0] = {"P", p, {}};
    targets[1] = {"Vol", vol, {}};
    const std::vector<MaskedSeries> covs = {{"driver", x, {}}};

    const auto cells = causality_sweep(targets, covs, 3, 0.10);
    for (const auto& cell : cells) {
        REQUIRE(cell.result.has_value());
        if (cell.target == "P" && cell.lag == 1) CHECK(cell.significant);
    }
    int vol_flags = 0;
    for (const auto& cell : cells) {
        if (cell.target == "Vol" && cell.significant) ++vol_flags;
    }
    CHECK(vol_flags <= 1); // noise may flag at most rarely at alpha = 0.10
}

TEST_CASE("ols residuals are orthogonal to the design (QR contract)") {
    SplitMix64 rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        const long n = 80, p = 6;
        Eigen::MatrixXd X(n, p);
        Eigen::VectorXd y(n);
        for (long i = 0; i < n; ++i) {
            X(i, 0) = 1.0;
            for (long j = 1; j < p; ++j) X(i, j) = rng.normal();
            y(i) = rng.normal();
        }
        const OlsFit fit = ols_fit(X, y);
        CHECK(fit.rank == p);
        const Eigen::VectorXd resid = y - X * fit.beta;
        for (long j = 0; j < p; ++j) {
            const double dot = std::abs(X.col(j).dot(resid));
            const double scale = X.col(j).norm() * resid.norm();
            CHECK(dot <= 1e-8 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("granger_test is deterministic") {
    SplitMix64 rng(10);
    const auto y = ar1(100, 0.5, 1.0, rng);
    const auto x = ar1(100, 0.3, 1.0, rng);
    const auto r1 = granger_test(y, x, 2);
    const auto r2 = granger_test(y, x, 2);
    CHECK(r1.rss_unrestricted == r2.rss_unrestricted);
    CHECK(r1.f_stat == r2.f_stat);
}
