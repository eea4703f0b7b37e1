// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "basisrisk/experiments.hpp"
#include "oracles.hpp"

using namespace basisrisk;

TEST_CASE("quadrature oracle examples") {
    const SimulationConfig cfg;
    SUBCASE("coincident points") {
        const OracleResult o = quadrature_oracle({{0.4, 0.6}, {0.4, 0.6}, 5.0, 1.0}, 0.2, cfg);
        CHECK(o.p_station_only == 0.0);
        CHECK(o.p_exposure_only == 0.0);
        CHECK(o.expected_br == 0.0);
        CHECK(o.var_br == 0.0);
        CHECK(o.p_trigger == 0.75);
    }
    SUBCASE("disjoint interior disks") {
        const OracleResult o = quadrature_oracle({{0.3, 0.5}, {0.7, 0.5}, 10.0, 1.0}, 0.1, cfg);
        CHECK(o.p_both == 0.0);
        CHECK(o.p_station_only == doctest::Approx(0.0314159).epsilon(1e-3));
        CHECK(o.p_exposure_only == doctest::Approx(0.0314159).epsilon(1e-3));
        CHECK(std::abs(o.expected_br) < 1e-12);  // mirror-symmetric grid
        CHECK(o.var_br == doctest::Approx(0.0314159).epsilon(2e-3));
        CHECK(o.p_trigger == 0.5);
    }
    SUBCASE("a footprint that always covers the square") {
        const OracleResult o =
            quadrature_oracle({{0.0, 0.0}, {1.0, 1.0}, 15.0, 1.0}, std::numbers::sqrt2, cfg);
        CHECK(o.p_both == 1.0);
        CHECK(o.expected_br == 0.0);
        CHECK(o.var_br == 0.0);
    }
    SUBCASE("overlapping disks match the lens area") {
        const double r = 0.15, d = 0.2;
        const OracleResult o = quadrature_oracle({{0.4, 0.5}, {0.6, 0.5}, 8.0, 1.0}, r, cfg);
        CHECK(o.p_both == doctest::Approx(oracle::lens_area(r, d)).epsilon(5e-3));
        CHECK(o.p_station_only ==
              doctest::Approx(oracle::disk_area(r) - oracle::lens_area(r, d)).epsilon(5e-3));
    }
    SUBCASE("threshold outside the severity range") {
        CHECK(quadrature_oracle({{0.1, 0.1}, {0.9, 0.9}, 25.0, 1.0}, 0.1, cfg).p_trigger == 0.0);
    }
    SUBCASE("errors") {
        const Contract c{{0.1, 0.1}, {0.9, 0.9}, 5.0, 1.0};
        CHECK_THROWS_AS(quadrature_oracle(c, 0.0, cfg), std::invalid_argument);
        SimulationConfig coarse = cfg;
        coarse.grid_n = 99;
        CHECK_THROWS_AS(quadrature_oracle(c, 0.1, coarse), std::invalid_argument);
    }
}

TEST_CASE("oracle coverage probabilities sum to one") {
    const SimulationConfig cfg;
    Stream s(7, StreamDomain::user, {50});
    for (int rep = 0; rep < 10; ++rep) {
        const Contract c = sample_contract(s, cfg);
        const OracleResult o = quadrature_oracle(c, 0.05 + 0.6 * s.uniform(), cfg);
        CHECK(std::abs(o.p_both + o.p_station_only + o.p_exposure_only + o.p_neither - 1.0) < 5e-3);
        CHECK(o.expected_br == doctest::Approx(o.p_trigger * (o.p_station_only - o.p_exposure_only)));
    }
}

TEST_CASE("diversification with one portfolio size") {
    SimulationConfig cfg;
    cfg.n = 500;
    DiversificationOptions opts;
    opts.m_max = 1;
    const DiversificationResult res = experiment_diversification(cfg, opts);
    REQUIRE(res.rows.size() == 1);
    cfg.m = 1;
    const PortfolioRun run = run_portfolio(cfg, {StreamDomain::diversification, 1});
    CHECK(res.rows[0].m == 1);
    CHECK(res.rows[0].aabrp_prime == run.portfolio.aabrp_prime);
    CHECK(res.rows[0].sigma_prime == run.portfolio.sigma_prime);
    CHECK(res.rows[0].variance_prime == doctest::Approx(run.portfolio.sigma_prime * run.portfolio.sigma_prime));
    CHECK_FALSE(res.pearson_variance.has_value());

    opts.m_max = 0;
    CHECK_THROWS_AS(experiment_diversification(cfg, opts), std::invalid_argument);
}

TEST_CASE("diversification sweep shape and determinism") {
    SimulationConfig cfg;
    cfg.n = 300;
    cfg.threads = 1;
    DiversificationOptions opts;
    opts.m_max = 45;
    const DiversificationResult a = experiment_diversification(cfg, opts);
    cfg.threads = 4;
    const DiversificationResult b = experiment_diversification(cfg, opts);
    REQUIRE(a.rows.size() == 45);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].m == i + 1);
        CHECK(a.rows[i].sigma_prime == b.rows[i].sigma_prime);
    }
    REQUIRE(a.bins.size() == 3);
    CHECK(a.bins[0].bin_low == 1.0);
    CHECK(a.bins[0].count == 20);
    CHECK(a.bins[2].count == 5);
    CHECK(a.pearson_variance.has_value());
    CHECK(a.fit_sigma.has_value());
}

TEST_CASE("spatial tests") {
    SimulationConfig cfg;
    cfg.n = 400;
    SpatialOptions opts;
    opts.tests = 60;
    opts.coincident_tests = {0};
    opts.threshold.bootstrap_reps = 30;
    const SpatialResult res = experiment_spatial(cfg, opts);
    REQUIRE(res.records.size() == 60);
    CHECK(res.records[0].ratio == 0.0);
    CHECK(res.records[0].aabrp == 0.0);
    CHECK(res.records[0].sigma == 0.0);
    for (std::size_t i = 0; i < res.records.size(); ++i) {
        const SpatialTestRecord& r = res.records[i];
        CHECK(r.test_id == i);
        CHECK(r.r >= cfg.rmin);
        CHECK(r.r <= cfg.rmax);
        CHECK(r.ratio == r.d / r.r);
        CHECK(r.d == distance(r.exposure, r.station));
        CHECK(r.threshold > 0.0);
        CHECK(r.threshold <= cfg.tmax);
    }
    CHECK(res.threshold_sigma.has_value());
    CHECK(res.threshold_abs_aabrp.has_value());

    // A test depends only on (seed, test id).
    const SpatialTestRecord again = run_spatial_test(cfg, 17, opts);
    CHECK(again.aabrp == res.records[17].aabrp);
    CHECK(again.sigma == res.records[17].sigma);

    opts.fixed_threshold = 7.5;
    CHECK(run_spatial_test(cfg, 3, opts).threshold == 7.5);
    opts.tests = 0;
    CHECK_THROWS_AS(experiment_spatial(cfg, opts), std::invalid_argument);
}

TEST_CASE("severity study") {
    SimulationConfig cfg;
    cfg.n = 1000;
    SeverityOptions opts;
    opts.pooled_configs = 20;
    const SeverityResult res = experiment_severity(cfg, opts);
    CHECK(res.untriggered_nonzero == 0);
    CHECK(res.severity.size() == 1000);
    CHECK(res.pooled_years == 20000);
    for (const stats::BinSummary& b : res.bins) {
        if (b.bin_high <= res.contract.threshold) {
            CHECK(b.mean == 0.0);
            CHECK(b.std == 0.0);
        }
        CHECK(b.bin_high - b.bin_low == doctest::Approx(0.5));
    }
    std::size_t total = 0;
    for (const stats::BinSummary& b : res.pooled_bins) total += b.count;
    CHECK(total == res.pooled_years);
    CHECK(res.pooled_triggered_years > 0);
    CHECK(res.pooled_triggered_years < res.pooled_years);
}

TEST_CASE("full diversification sweep converges toward zero") {
    const SimulationConfig cfg;
    const DiversificationResult res = experiment_diversification(cfg);
    REQUIRE(res.rows.size() == 500);
    std::vector<double> small;
    for (std::size_t i = 0; i < 20; ++i) small.push_back(std::abs(res.rows[i].aabrp_prime));
    std::sort(small.begin(), small.end());
    const double p90 = small[17];  // 90th percentile of 20 values, nearest rank
    CHECK(std::abs(res.rows.back().aabrp_prime) < p90);
    REQUIRE(res.pearson_variance.has_value());
    CHECK(*res.pearson_variance < -0.3);
    REQUIRE(res.bins.size() == 25);
    CHECK(res.bins.front().count == 20);
}
