// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "basisrisk/kernels.hpp"
#include "basisrisk/parallel.hpp"

namespace basisrisk {

namespace {

template <typename Fn>
auto try_estimate(Fn&& fn) -> std::optional<decltype(fn())> {
    try {
        return fn();
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

}  // namespace

OracleResult quadrature_oracle(const Contract& c, double r, const SimulationConfig& cfg) {
    if (!(r > 0.0)) throw std::invalid_argument("oracle: radius must be > 0");
    if (cfg.grid_n < kMinGridN) throw std::invalid_argument("grid_n: must be >= 100 for the oracle");
    const std::size_t g = cfg.grid_n;
    const double h = 1.0 / static_cast<double>(g);
    const auto& k = kernels::active();
    kernels::CoverageCounts counts;
    for (std::size_t j = 0; j < g; ++j)
        k.classify_row((static_cast<double>(j) + 0.5) * h, h, g, c.exposure, c.station, r, counts);
    const double cells = static_cast<double>(g) * static_cast<double>(g);

    OracleResult o;
    o.p_trigger = std::clamp((cfg.smax - c.threshold) / cfg.smax, 0.0, 1.0);
    o.p_both = static_cast<double>(counts.both) / cells;
    o.p_station_only = static_cast<double>(counts.station_only) / cells;
    o.p_exposure_only = static_cast<double>(counts.exposure_only) / cells;
    o.p_neither = static_cast<double>(counts.neither) / cells;
    o.expected_br = o.p_trigger * (o.p_station_only - o.p_exposure_only);
    o.var_br = o.p_trigger * (o.p_station_only + o.p_exposure_only) - o.expected_br * o.expected_br;
    return o;
}

DiversificationResult experiment_diversification(const SimulationConfig& cfg,
                                                 const DiversificationOptions& opts) {
    cfg.validate();
    std::vector<std::size_t> sizes = opts.m_values;
    if (sizes.empty()) {
        if (opts.m_max < 1) throw std::invalid_argument("m_max: must be >= 1");
        sizes.resize(opts.m_max);
        std::iota(sizes.begin(), sizes.end(), std::size_t{1});
    }
    if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t m) { return m < 1; }))
        throw std::invalid_argument("m_values: portfolio sizes must be >= 1");

    DiversificationResult out;
    out.rows.resize(sizes.size());
    // Largest portfolios first keeps the dynamic schedule balanced.
    std::vector<std::size_t> schedule(sizes.size());
    std::iota(schedule.begin(), schedule.end(), std::size_t{0});
    std::stable_sort(schedule.begin(), schedule.end(),
                     [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });
    parallel_for(schedule.size(), cfg.threads, [&](std::size_t s) {
        const std::size_t idx = schedule[s];
        SimulationConfig pc = cfg;
        pc.m = sizes[idx];
        pc.threads = 1;
        const PortfolioRun run =
            run_portfolio(pc, {StreamDomain::diversification, static_cast<std::uint64_t>(pc.m)});
        out.rows[idx] = {pc.m, run.portfolio.aabrp_prime, run.portfolio.sigma_prime,
                         run.portfolio.sigma_prime * run.portfolio.sigma_prime};
    });

    std::vector<double> m, aabrp, sigma, var;
    for (const SweepRow& r : out.rows) {
        m.push_back(static_cast<double>(r.m));
        aabrp.push_back(r.aabrp_prime);
        sigma.push_back(r.sigma_prime);
        var.push_back(r.variance_prime);
    }
    out.bins = stats::bin_summary(m, aabrp, opts.bin_width, 1.0);
    out.pearson_variance = try_estimate([&] { return stats::pearson(m, var); });
    out.pearson_sigma = try_estimate([&] { return stats::pearson(m, sigma); });
    out.fit_sigma = try_estimate([&] { return stats::fit_decay(m, sigma, std::nullopt, opts.fit); });

    std::vector<double> centre, spread;
    for (const stats::BinSummary& b : out.bins) {
        if (b.count < 2) continue;
        centre.push_back(0.5 * (b.bin_low + b.bin_high));
        spread.push_back(b.std);
    }
    out.fit_bin_std =
        try_estimate([&] { return stats::fit_decay(centre, spread, std::nullopt, opts.fit); });
    return out;
}

SpatialTestRecord run_spatial_test(const SimulationConfig& cfg, std::size_t test_id,
                                   const SpatialOptions& opts) {
    Stream stream(cfg.seed, StreamDomain::spatial, {test_id});
    Contract c;
    c.exposure = sample_point(stream);
    c.station = sample_point(stream);
    const double r = cfg.rmin + (cfg.rmax - cfg.rmin) * stream.uniform();
    c.threshold = threshold_from_uniform(stream.uniform(), cfg.tmax);
    if (opts.fixed_threshold) c.threshold = *opts.fixed_threshold;
    if (std::find(opts.coincident_tests.begin(), opts.coincident_tests.end(), test_id) !=
        opts.coincident_tests.end())
        c.station = c.exposure;

    const ContractSeries series =
        simulate_contract(c, cfg.n, stream, EventLaw::fixed_radius(r, cfg.smax), test_id);
    const ContractStats st = contract_stats(series, cfg.divisor);

    SpatialTestRecord rec;
    rec.test_id = test_id;
    rec.exposure = c.exposure;
    rec.station = c.station;
    rec.d = distance(c.exposure, c.station);
    rec.r = r;
    rec.ratio = rec.d / r;
    rec.threshold = c.threshold;
    rec.aabrp = st.aabrp;
    rec.sigma = st.sigma;
    return rec;
}

SpatialResult experiment_spatial(const SimulationConfig& cfg, const SpatialOptions& opts) {
    cfg.validate();
    if (opts.tests < 1) throw std::invalid_argument("tests: must be >= 1");
    if (opts.fixed_threshold && !(*opts.fixed_threshold > 0.0))
        throw std::invalid_argument("spatial_threshold: must be > 0");

    SpatialResult out;
    out.records.resize(opts.tests);
    parallel_for(opts.tests, cfg.threads,
                 [&](std::size_t i) { out.records[i] = run_spatial_test(cfg, i, opts); });

    std::vector<double> ratio, aabrp, sigma;
    for (const SpatialTestRecord& r : out.records) {
        ratio.push_back(r.ratio);
        aabrp.push_back(r.aabrp);
        sigma.push_back(r.sigma);
    }
    out.bins_aabrp = stats::bin_summary(ratio, aabrp, opts.ratio_bin_width, 0.0);
    out.bins_sigma = stats::bin_summary(ratio, sigma, opts.ratio_bin_width, 0.0);

    std::vector<double> rx, abs_a, sig_a, sig_s;
    for (const SpatialTestRecord& r : out.records) {
        if (!(r.ratio <= opts.regression_max_ratio)) continue;
        rx.push_back(r.ratio);
        abs_a.push_back(std::abs(r.aabrp));
        sig_a.push_back(r.aabrp);
        sig_s.push_back(r.sigma);
    }
    stats::ThresholdOptions t = opts.threshold;
    t.seed = cfg.seed;
    t.threads = cfg.threads;
    t.stream_key = 1;
    out.threshold_abs_aabrp = try_estimate([&] { return stats::threshold_regression(rx, abs_a, t); });
    t.stream_key = 2;
    out.threshold_aabrp = try_estimate([&] { return stats::threshold_regression(rx, sig_a, t); });
    t.stream_key = 3;
    out.threshold_sigma = try_estimate([&] { return stats::threshold_regression(rx, sig_s, t); });
    return out;
}

SeverityResult experiment_severity(const SimulationConfig& cfg, const SeverityOptions& opts) {
    cfg.validate();
    if (!(opts.bin_width > 0.0)) throw std::invalid_argument("severity_bin_width: must be > 0");

    auto run_one = [&](std::initializer_list<std::uint64_t> path) {
        Stream stream(cfg.seed, StreamDomain::severity, path);
        const Contract c = sample_contract(stream, cfg);
        return simulate_contract(c, cfg.n, stream, cfg);
    };
    auto count_untriggered_nonzero = [](const ContractSeries& s) {
        std::size_t bad = 0;
        for (std::size_t j = 0; j < s.years(); ++j)
            bad += s.severity[j] < s.contract.threshold && s.br[j] != 0;
        return bad;
    };
    auto triggered_pairs = [](const ContractSeries& s, std::vector<double>& sev,
                              std::vector<double>& br) {
        for (std::size_t j = 0; j < s.years(); ++j) {
            if (s.severity[j] < s.contract.threshold) continue;
            sev.push_back(s.severity[j]);
            br.push_back(s.br[j]);
        }
    };

    SeverityResult out;
    const ContractSeries single = run_one({0});
    out.contract = single.contract;
    out.severity = single.severity;
    out.br = single.br;
    out.untriggered_nonzero = count_untriggered_nonzero(single);
    {
        const std::vector<double> brd(single.br.begin(), single.br.end());
        out.bins = stats::bin_summary(single.severity, brd, opts.bin_width, 0.0);
        std::vector<double> sev, br;
        triggered_pairs(single, sev, br);
        out.pearson_triggered = try_estimate([&] { return stats::pearson(sev, br); });
    }

    std::vector<ContractSeries> pooled(opts.pooled_configs);
    parallel_for(pooled.size(), cfg.threads, [&](std::size_t k) { pooled[k] = run_one({1, k}); });
    std::vector<double> all_sev, all_br, trig_sev, trig_br;
    for (const ContractSeries& s : pooled) {
        out.untriggered_nonzero += count_untriggered_nonzero(s);
        all_sev.insert(all_sev.end(), s.severity.begin(), s.severity.end());
        all_br.insert(all_br.end(), s.br.begin(), s.br.end());
        triggered_pairs(s, trig_sev, trig_br);
    }
    out.pooled_years = all_sev.size();
    out.pooled_triggered_years = trig_sev.size();
    out.pooled_bins = stats::bin_summary(all_sev, all_br, opts.bin_width, 0.0);
    out.pooled_pearson_triggered = try_estimate([&] { return stats::pearson(trig_sev, trig_br); });
    return out;
}

}  // namespace basisrisk
