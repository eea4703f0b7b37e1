// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "basisrisk/engine.hpp"
#include "basisrisk/model.hpp"
#include "basisrisk/stats.hpp"

namespace basisrisk {

// ---------------------------------------------------------------------------
// Quadrature oracle
// ---------------------------------------------------------------------------

/// Exact moments of one contract-year's basis risk for a fixed footprint
/// radius, with centroid uniform on the square and severity uniform on
/// [0, Smax].
struct OracleResult {
    double p_trigger = 0.0;
    double p_both = 0.0;
    double p_station_only = 0.0;
    double p_exposure_only = 0.0;
    double p_neither = 0.0;
    double expected_br = 0.0;
    double var_br = 0.0;
};

/// Uses cfg.smax and cfg.grid_n. Throws std::invalid_argument for r <= 0
/// or grid_n < 100.
OracleResult quadrature_oracle(const Contract& c, double r, const SimulationConfig& cfg);

// ---------------------------------------------------------------------------
// Diversification sweep
// ---------------------------------------------------------------------------

struct DiversificationOptions {
    std::size_t m_max = 500;
    /// Explicit portfolio sizes; when empty, 1..m_max.
    std::vector<std::size_t> m_values;
    double bin_width = 20.0;
    stats::FitOptions fit;
};

struct SweepRow {
    std::size_t m = 0;
    double aabrp_prime = 0.0;
    double sigma_prime = 0.0;
    double variance_prime = 0.0;
};

struct DiversificationResult {
    std::vector<SweepRow> rows;
    /// AABRP' summarised over consecutive blocks of bin_width sizes.
    std::vector<stats::BinSummary> bins;
    std::optional<double> pearson_variance;
    std::optional<double> pearson_sigma;
    /// Decay fit of sigma' against m.
    std::optional<stats::FitResult> fit_sigma;
    /// Decay fit of the per-block std of AABRP' against block centre.
    std::optional<stats::FitResult> fit_bin_std;
};

/// Portfolio of size m uses PortfolioStreams{diversification, m}.
DiversificationResult experiment_diversification(const SimulationConfig& cfg,
                                                 const DiversificationOptions& opts = {});

// ---------------------------------------------------------------------------
// Spatial-ratio study
// ---------------------------------------------------------------------------

struct SpatialTestRecord {
    std::size_t test_id = 0;
    Point exposure;
    Point station;
    double d = 0.0;
    double r = 0.0;
    double ratio = 0.0;
    double threshold = 0.0;
    double aabrp = 0.0;
    double sigma = 0.0;
};

struct SpatialOptions {
    std::size_t tests = 500;
    double ratio_bin_width = 0.05;
    /// When set, every test uses this threshold instead of a fresh draw.
    std::optional<double> fixed_threshold;
    /// Test ids whose station is moved onto the exposure.
    std::vector<std::size_t> coincident_tests;
    /// Threshold regressions use tests with ratio <= this bound.
    double regression_max_ratio = std::numeric_limits<double>::infinity();
    stats::ThresholdOptions threshold;
};

struct SpatialResult {
    std::vector<SpatialTestRecord> records;
    std::vector<stats::BinSummary> bins_aabrp;
    std::vector<stats::BinSummary> bins_sigma;
    std::optional<stats::ThresholdFit> threshold_abs_aabrp;
    std::optional<stats::ThresholdFit> threshold_aabrp;
    std::optional<stats::ThresholdFit> threshold_sigma;
};

/// One test: geometry, radius and threshold are drawn once from
/// Stream(seed, spatial, {test_id}) and held over cfg.n years in which
/// centroid and severity vary. The radius is uniform on [rmin, rmax].
SpatialTestRecord run_spatial_test(const SimulationConfig& cfg, std::size_t test_id,
                                   const SpatialOptions& opts = {});

SpatialResult experiment_spatial(const SimulationConfig& cfg, const SpatialOptions& opts = {});

// ---------------------------------------------------------------------------
// Severity study
// ---------------------------------------------------------------------------

struct SeverityOptions {
    double bin_width = 0.5;
    std::size_t pooled_configs = 200;
};

struct SeverityResult {
    Contract contract;
    std::vector<double> severity;
    std::vector<std::int8_t> br;
    /// Basis risk summarised per severity bin, single contract.
    std::vector<stats::BinSummary> bins;
    /// Same, over all pooled contract-years.
    std::vector<stats::BinSummary> pooled_bins;
    /// Correlation of severity and BR over triggered years; empty when BR
    /// is constant there.
    std::optional<double> pearson_triggered;
    std::optional<double> pooled_pearson_triggered;
    std::size_t pooled_triggered_years = 0;
    std::size_t pooled_years = 0;
    /// Years with severity below the contract threshold and BR != 0,
    /// counted over the single and all pooled contracts.
    std::size_t untriggered_nonzero = 0;
};

SeverityResult experiment_severity(const SimulationConfig& cfg, const SeverityOptions& opts = {});

}  // namespace basisrisk
