// SPDX-License-Identifier: Apache-2.0
#include "basisrisk/engine.hpp"

#include <cmath>
#include <stdexcept>

#include "basisrisk/kernels.hpp"
#include "basisrisk/parallel.hpp"

namespace basisrisk {

ContractSeries simulate_contract(const Contract& c, std::size_t n, Stream& stream,
                                 const EventLaw& law, std::size_t contract_id) {
    if (n < 1) throw std::invalid_argument("n: must satisfy n >= 1");
    std::vector<double> cx(n), cy(n), radius(n);
    ContractSeries out;
    out.contract_id = contract_id;
    out.contract = c;
    out.severity.resize(n);
    out.br.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const HazardEvent e = sample_event(stream, law);
        cx[j] = e.centroid.x;
        cy[j] = e.centroid.y;
        radius[j] = e.radius;
        out.severity[j] = e.severity;
    }
    const kernels::EventColumns events{cx, cy, radius, out.severity};
    kernels::active().evaluate_years({c.exposure, c.station, c.threshold}, events, out.br);
    return out;
}

ContractSeries simulate_contract(const Contract& c, std::size_t n, Stream& stream,
                                 const SimulationConfig& cfg, std::size_t contract_id) {
    return simulate_contract(c, n, stream, EventLaw::from(cfg), contract_id);
}

double integer_series_variance(std::int64_t sum, std::int64_t sum_sq, std::size_t n,
                               StdevDivisor divisor) {
    const auto nn = static_cast<std::int64_t>(n);
    const std::int64_t denom = divisor == StdevDivisor::sample ? nn * (nn - 1) : nn * nn;
    if (denom <= 0) throw std::invalid_argument("stdev: needs n >= 2 (sample divisor)");
    // n * sum_sq - sum^2 is n^2 times the population variance, exactly.
    const std::int64_t num = nn * sum_sq - sum * sum;
    return static_cast<double>(num) / static_cast<double>(denom);
}

ContractStats contract_stats(std::span<const std::int8_t> br, double premium,
                             StdevDivisor divisor) {
    if (br.empty()) throw std::invalid_argument("contract_stats: empty series");
    const auto mom = kernels::active().moments_i8(br);
    const double n = static_cast<double>(br.size());
    ContractStats s;
    s.aabrp = static_cast<double>(mom.sum) / (n * premium);
    s.sigma = std::sqrt(integer_series_variance(mom.sum, mom.sum_sq, br.size(), divisor)) / premium;
    return s;
}

ContractStats contract_stats(const ContractSeries& s, StdevDivisor divisor) {
    return contract_stats(s.br, s.premium(), divisor);
}

PortfolioStats portfolio_stats(std::span<const ContractSeries> series, StdevDivisor divisor) {
    if (series.empty()) throw std::invalid_argument("portfolio_stats: needs m >= 1 contracts");
    const std::size_t n = series.front().years();
    const auto& k = kernels::active();
    PortfolioStats p;
    p.br_prime.assign(n, 0);
    for (const ContractSeries& s : series) {
        if (s.years() != n)
            throw std::invalid_argument("portfolio_stats: contracts have mismatched year counts");
        k.accumulate_i8(s.br, p.br_prime);
        p.total_premium += s.premium();
    }
    const auto mom = k.moments_i32(p.br_prime);
    p.aabrp_prime = static_cast<double>(mom.sum) / static_cast<double>(n) / p.total_premium;
    p.sigma_prime = std::sqrt(integer_series_variance(mom.sum, mom.sum_sq, n, divisor)) /
                    p.total_premium;
    return p;
}

PortfolioRun run_portfolio(const SimulationConfig& cfg, PortfolioStreams streams) {
    cfg.validate();
    std::vector<ContractSeries> series(cfg.m);
    parallel_for(cfg.m, cfg.threads, [&](std::size_t i) {
        Stream stream(cfg.seed, streams.domain, {streams.key, i});
        const Contract c = sample_contract(stream, cfg);
        series[i] = simulate_contract(c, cfg.n, stream, cfg, i);
    });
    PortfolioRun run;
    run.contracts.reserve(cfg.m);
    run.contract_stats.reserve(cfg.m);
    for (const ContractSeries& s : series) {
        run.contracts.push_back(s.contract);
        run.contract_stats.push_back(contract_stats(s, cfg.divisor));
    }
    run.portfolio = portfolio_stats(series, cfg.divisor);
    return run;
}

}  // namespace basisrisk
