// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "basisrisk/model.hpp"
#include "basisrisk/random.hpp"

namespace basisrisk {

struct ContractSeries {
    std::size_t contract_id = 0;
    Contract contract;
    std::vector<std::int8_t> br;
    std::vector<double> severity;

    std::size_t years() const { return br.size(); }
    double premium() const { return contract.premium; }
};

struct ContractStats {
    double aabrp = 0.0;
    double sigma = 0.0;
};

struct PortfolioStats {
    std::vector<std::int32_t> br_prime;
    double aabrp_prime = 0.0;
    double sigma_prime = 0.0;
    double total_premium = 0.0;
};

/// Draws n events from `stream` under `law` and records each year's basis
/// risk and severity.
ContractSeries simulate_contract(const Contract& c, std::size_t n, Stream& stream,
                                 const EventLaw& law, std::size_t contract_id = 0);
ContractSeries simulate_contract(const Contract& c, std::size_t n, Stream& stream,
                                 const SimulationConfig& cfg, std::size_t contract_id = 0);

/// Variance of an integer series from exact integer moments. Throws
/// std::invalid_argument when the divisor would be zero.
double integer_series_variance(std::int64_t sum, std::int64_t sum_sq, std::size_t n,
                               StdevDivisor divisor);

ContractStats contract_stats(std::span<const std::int8_t> br, double premium,
                             StdevDivisor divisor = StdevDivisor::sample);
ContractStats contract_stats(const ContractSeries& s,
                             StdevDivisor divisor = StdevDivisor::sample);

/// Throws std::invalid_argument on an empty set or mismatched year counts.
PortfolioStats portfolio_stats(std::span<const ContractSeries> series,
                               StdevDivisor divisor = StdevDivisor::sample);

/// Stream identity for a portfolio: contract i draws from
/// Stream(seed, domain, {key, i}).
struct PortfolioStreams {
    StreamDomain domain = StreamDomain::portfolio;
    std::uint64_t key = 0;
};

struct PortfolioRun {
    std::vector<Contract> contracts;
    std::vector<ContractStats> contract_stats;
    PortfolioStats portfolio;
};

/// Samples cfg.m contracts and simulates each over cfg.n years. Contract i
/// first draws its geometry and threshold, then its events, from its own
/// substream.
PortfolioRun run_portfolio(const SimulationConfig& cfg, PortfolioStreams streams = {});

}  // namespace basisrisk
